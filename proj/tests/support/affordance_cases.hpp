#pragma once

#include <string>
#include <vector>

#include "arena/core/affordance.hpp"
#include "arena/core/simulator.hpp"
#include "support/fixtures.hpp"

namespace arena::testing {

// A fixture object exercising one property, plus the setup that brings the
// agent within reach (and into the required pre-state).
struct AffordanceCase {
  AffordanceProperty property;
  std::string scene;
  std::string target;
  std::vector<Action> setup;
  std::vector<std::pair<std::string, bool>> forced_states;  // applied to target before setup
};

inline std::vector<AffordanceCase> affordance_cases() {
  using P = AffordanceProperty;
  using A = ActionType;
  auto go = [](const char* id) { return std::vector<Action>{Action::goto_object(id)}; };
  return {
      {P::Pickupable, "lab", "mug_1", go("mug_1"), {}},
      {P::Openable, "lab", "fridge_1", go("fridge_1"), {}},
      {P::Breakable, "lab", "bowl_1", go("bowl_1"), {}},
      {P::Receptacle, "lab", "counter_1",
       {Action::goto_object("mug_1"), Action::on(A::Pickup, "mug_1")}, {}},
      {P::Toggleable, "office", "lamp_1", go("lamp_1"), {}},
      {P::Powerable, "lab", "robot_arm_1", go("robot_arm_1"), {}},
      {P::Dirtyable, "lab", "plate_1", go("plate_1"), {{"isDirty", true}}},
      {P::Heatable, "lab", "burrito_1", go("burrito_1"), {}},
      {P::Eatable, "lab", "apple_1", go("apple_1"), {}},
      {P::Chillable, "lab", "burrito_1", go("burrito_1"), {}},
      {P::Fillable, "lab", "water_bottle_1", go("water_bottle_1"), {}},
      {P::Cookable, "lab", "egg_1", go("egg_1"), {}},
      {P::Infectable, "lab", "petri_dish_1", go("petri_dish_1"), {{"isInfected", true}}},
  };
}

struct CaseOutcome {
  WorldState before;
  WorldState after;
  ActionResult result;
  bool setup_ok = true;
};

inline CaseOutcome run_affordance_case(const AffordanceCase& c, const Action& action) {
  WorldState s = fixture_scenes().get(c.scene);
  for (const auto& [k, v] : c.forced_states) s.objects.at(c.target).states[k] = v;
  bool ok = true;
  for (const auto& a : c.setup) {
    auto [next, r] = apply_action(s, a);
    ok = ok && r.ok;
    s = std::move(next);
  }
  auto [after, result] = apply_action(s, action);
  return {std::move(s), std::move(after), std::move(result), ok};
}

// The delta entry the property's transition should produce on this case.
inline DeltaEntry expected_entry(const AffordanceCase& c, const Transition& t) {
  if (c.property == AffordanceProperty::Receptacle) return {"mug_1", "contained_in", StateValue{}, c.target};
  if (c.property == AffordanceProperty::Pickupable) return {c.target, "held", false, true};
  return {c.target, std::string(t.state_key), !t.value, t.value};
}

}  // namespace arena::testing
