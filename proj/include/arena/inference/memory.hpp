#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arena/core/observation.hpp"

namespace arena {

// Where and when an instance was last seen.
struct Sighting {
  std::string instance;
  std::string class_name;
  AgentPose pose;  // pose the observation was taken from
  std::uint64_t tick = 0;
  double depth = 0;
  int cells = 0;

  friend bool operator==(const Sighting&, const Sighting&) = default;
};

// Per-room last-seen map built from observations; latest sighting wins.
class VisualMemory {
 public:
  void update(const Observation& obs);

  const Sighting* find(std::string_view instance) const;
  // Sightings of a class, optionally restricted to a room: most recent
  // first, then nearest, then by id.
  std::vector<const Sighting*> of_class(std::string_view class_name, std::optional<std::string_view> room = {}) const;
  std::size_t size() const { return seen_.size(); }

  friend bool operator==(const VisualMemory&, const VisualMemory&) = default;

 private:
  std::map<std::string, Sighting, std::less<>> seen_;
};

}  // namespace arena
