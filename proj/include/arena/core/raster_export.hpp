#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "arena/core/observation.hpp"

namespace arena {

// Stable legend color for a visible-list index.
std::array<unsigned char, 3> legend_color(int index);

// Binary PGM: cell value = visible index + 1, 0 for empty.
void write_pgm(const Observation& obs, const std::filesystem::path& path);
// RGB PNG of the raster colored by legend_color, depth-shaded.
void write_legend_png(const Observation& obs, const std::filesystem::path& path);
// One line per visible instance: index, color, id, class, cells, depth.
std::string legend_text(const Observation& obs);

}  // namespace arena
