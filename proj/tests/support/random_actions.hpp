#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "arena/core/action.hpp"
#include "arena/core/observation.hpp"
#include "arena/core/world.hpp"

namespace arena::testing {

// Deterministic random action source. Mixes navigation, goto-object and
// interactions on visible, arbitrary and coordinate-selected targets so
// fuzzing reaches both successful transitions and every failure path.
class RandomActions {
 public:
  explicit RandomActions(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

  Action next(const WorldState& s) {
    const auto roll = below(100);
    if (roll < 8) return Action::simple(static_cast<ActionType>(below(6)));  // Move/Rotate/Look
    if (roll < 20) return Action::goto_object(pick_object(s));
    if (roll < 23) {
      auto it = s.layout->rooms.begin();
      std::advance(it, below(s.layout->rooms.size()));
      return Action::goto_room(it->first);
    }
    if (roll < 25) {
      auto it = s.layout->viewpoints.begin();
      std::advance(it, below(s.layout->viewpoints.size()));
      return Action::goto_viewpoint(it->first);
    }
    if (roll < 26) return Action::dialog("hello");
    const auto verb = static_cast<ActionType>(static_cast<int>(ActionType::Pickup) + below(16));
    if (roll < 32) {
      const auto obs = render_observation(s);
      return Action::on(verb, TargetSelector::at(static_cast<int>(below(obs.width)), static_cast<int>(below(obs.height))));
    }
    if (roll < 80) {
      const auto obs = render_observation(s);
      if (!obs.visible.empty()) return Action::on(verb, obs.visible[below(obs.visible.size())].id);
    }
    if (roll < 83) return Action::on(ActionType::Highlight, pick_object(s));
    return Action::on(verb, pick_object(s));
  }

 private:
  std::string pick_object(const WorldState& s) {
    auto it = s.objects.begin();
    std::advance(it, below(s.objects.size()));
    return it->first;
  }

  std::mt19937_64 rng_;
};

}  // namespace arena::testing
