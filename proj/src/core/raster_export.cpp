#include "arena/core/raster_export.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "arena/core/error.hpp"
#include "arena/core/world.hpp"

namespace arena {

std::array<unsigned char, 3> legend_color(int index) {
  // Golden-angle hue walk, fixed saturation/value.
  const double h = std::fmod(index * 137.508, 360.0) / 60.0;
  const double c = 0.85, x = c * (1 - std::abs(std::fmod(h, 2.0) - 1)), m = 0.1;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  auto q = [&](double v) { return static_cast<unsigned char>((v + m) * 255.0); };
  return {q(r), q(g), q(b)};
}

void write_pgm(const Observation& obs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "P5\n" << obs.width << " " << obs.height << "\n255\n";
  for (auto c : obs.cells) out.put(static_cast<char>(c < 0 ? 0 : std::min(c + 1, 255)));
}

void write_legend_png(const Observation& obs, const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(obs.width);
  img.height = static_cast<png_uint_32>(obs.height);
  img.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> rgb(static_cast<std::size_t>(obs.width) * obs.height * 3, 24);
  for (std::size_t i = 0; i < obs.cells.size(); ++i) {
    if (obs.cells[i] < 0) continue;
    const auto col = legend_color(obs.cells[i]);
    const double shade = std::clamp(1.0 - obs.depth[i] / (2 * kFarPlane), 0.3, 1.0);
    for (int k = 0; k < 3; ++k) rgb[i * 3 + k] = static_cast<unsigned char>(col[k] * shade);
  }
  if (!png_image_write_to_file(&img, path.c_str(), 0, rgb.data(), 0, nullptr)) {
    throw Error(ErrorCode::IoError, "png write failed: " + std::string(img.message));
  }
}

std::string legend_text(const Observation& obs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < obs.visible.size(); ++i) {
    const auto& v = obs.visible[i];
    const auto col = legend_color(static_cast<int>(i));
    char hex[8];
    std::snprintf(hex, sizeof hex, "#%02x%02x%02x", col[0], col[1], col[2]);
    os << (i + 1) << "\t" << hex << "\t" << v.id << "\t" << v.class_name << "\t" << v.cells << "\t" << v.depth
       << "\n";
  }
  return os.str();
}

}  // namespace arena
