#pragma once

#include <set>
#include <string>
#include <variant>

#include <json.hpp>

namespace arena {

struct WorldState;

// Boolean state, containment target (string) or "no containment" (monostate).
using StateValue = std::variant<std::monostate, bool, std::string>;

struct DeltaEntry {
  std::string instance;
  std::string key;
  StateValue old_value;
  StateValue new_value;

  auto operator<=>(const DeltaEntry&) const = default;
  bool operator==(const DeltaEntry&) const = default;
};

using StateDelta = std::set<DeltaEntry>;

// Inserts an entry unless old == new.
void record_change(StateDelta& delta, std::string instance, std::string key, StateValue old_value,
                   StateValue new_value);

// Differences in state keys, containment and held flags between two states
// of the same scene. Throws Error{SceneMismatch}.
StateDelta diff_states(const WorldState& a, const WorldState& b);

void state_value_to_json(nlohmann::json& j, const StateValue& v);
void state_value_from_json(const nlohmann::json& j, StateValue& v);
void to_json(nlohmann::json& j, const DeltaEntry& e);
void from_json(const nlohmann::json& j, DeltaEntry& e);

}  // namespace arena

template <>
struct nlohmann::adl_serializer<arena::StateValue> {
  static void to_json(json& j, const arena::StateValue& v) { arena::state_value_to_json(j, v); }
  static void from_json(const json& j, arena::StateValue& v) { arena::state_value_from_json(j, v); }
};
