#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/core/pose.hpp"

namespace arena {

struct WorldState;

struct VisibleObject {
  std::string id;
  std::string class_name;
  int cells = 0;
  // Inclusive cell bounds of the mask.
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double depth = 0;  // meters to the closest point of the object

  friend bool operator==(const VisibleObject&, const VisibleObject&) = default;
};

// Egocentric symbolic view. `cells` holds, per raster cell in row-major
// order, an index into `visible` or -1 for empty. `depth` is per-cell meters
// (far plane for empty cells).
struct Observation {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> cells;
  std::vector<double> depth;
  std::vector<VisibleObject> visible;  // sorted by id
  AgentPose pose;
  std::uint64_t tick = 0;

  std::optional<std::string> id_at(int x, int y) const;
  const VisibleObject* find_visible(std::string_view id) const;

  friend bool operator==(const Observation&, const Observation&) = default;
};

// Pure function of the state and raster dimensions. width, height >= 16.
Observation render_observation(const WorldState& state, int width, int height);
Observation render_observation(const WorldState& state);

// Throws Error{CoordinateOutOfBounds}.
std::optional<std::string> object_at(const Observation& obs, int x, int y);

// Compact wire form: visible list plus run-length encoded index raster.
// Depth is reconstructed from the visible list on decode.
void to_json(nlohmann::json& j, const Observation& o);
void from_json(const nlohmann::json& j, Observation& o);

}  // namespace arena
