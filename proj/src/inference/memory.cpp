#include "arena/inference/memory.hpp"

#include <algorithm>
#include <tuple>

namespace arena {

void VisualMemory::update(const Observation& obs) {
  for (const auto& v : obs.visible) {
    seen_[v.id] = Sighting{v.id, v.class_name, obs.pose, obs.tick, v.depth, v.cells};
  }
}

const Sighting* VisualMemory::find(std::string_view instance) const {
  auto it = seen_.find(instance);
  return it == seen_.end() ? nullptr : &it->second;
}

std::vector<const Sighting*> VisualMemory::of_class(std::string_view class_name,
                                                    std::optional<std::string_view> room) const {
  std::vector<const Sighting*> out;
  for (const auto& [id, s] : seen_) {
    if (s.class_name == class_name && (!room || s.pose.room == *room)) out.push_back(&s);
  }
  std::sort(out.begin(), out.end(), [](const Sighting* a, const Sighting* b) {
    if (a->tick != b->tick) return a->tick > b->tick;
    return std::tie(a->depth, a->instance) < std::tie(b->depth, b->instance);
  });
  return out;
}

}  // namespace arena
