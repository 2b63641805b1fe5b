#include "arena/core/delta.hpp"

#include "arena/core/error.hpp"
#include "arena/core/world.hpp"

namespace arena {

void record_change(StateDelta& delta, std::string instance, std::string key, StateValue old_value,
                   StateValue new_value) {
  if (old_value == new_value) return;
  delta.insert(DeltaEntry{std::move(instance), std::move(key), std::move(old_value), std::move(new_value)});
}

namespace {

StateValue containment(const ObjectInstance& o) {
  return o.contained_in ? StateValue{*o.contained_in} : StateValue{};
}

}  // namespace

StateDelta diff_states(const WorldState& a, const WorldState& b) {
  if (a.scene_id != b.scene_id || a.objects.size() != b.objects.size()) {
    throw Error(ErrorCode::SceneMismatch, a.scene_id + " vs " + b.scene_id);
  }
  StateDelta delta;
  for (const auto& [id, oa] : a.objects) {
    const ObjectInstance* ob = b.find(id);
    if (!ob) throw Error(ErrorCode::SceneMismatch, "instance " + id + " missing");
    record_change(delta, id, std::string(state_key::kHeld), oa.held, ob->held);
    record_change(delta, id, std::string(state_key::kContainedIn), containment(oa), containment(*ob));
    auto ia = oa.states.begin(), ib = ob->states.begin();
    while (ia != oa.states.end() || ib != ob->states.end()) {
      if (ib == ob->states.end() || (ia != oa.states.end() && ia->first < ib->first)) {
        record_change(delta, id, ia->first, ia->second, StateValue{});
        ++ia;
      } else if (ia == oa.states.end() || ib->first < ia->first) {
        record_change(delta, id, ib->first, StateValue{}, ib->second);
        ++ib;
      } else {
        record_change(delta, id, ia->first, ia->second, ib->second);
        ++ia;
        ++ib;
      }
    }
  }
  return delta;
}

void state_value_to_json(nlohmann::json& j, const StateValue& v) {
  if (std::holds_alternative<bool>(v)) {
    j = std::get<bool>(v);
  } else if (std::holds_alternative<std::string>(v)) {
    j = std::get<std::string>(v);
  } else {
    j = nullptr;
  }
}

void state_value_from_json(const nlohmann::json& j, StateValue& v) {
  if (j.is_boolean()) {
    v = j.get<bool>();
  } else if (j.is_string()) {
    v = j.get<std::string>();
  } else if (j.is_null()) {
    v = std::monostate{};
  } else {
    throw Error(ErrorCode::SchemaError, "state value must be bool, string or null");
  }
}

void to_json(nlohmann::json& j, const DeltaEntry& e) {
  j = nlohmann::json{{"instance", e.instance}, {"key", e.key}, {"old", e.old_value}, {"new", e.new_value}};
}

void from_json(const nlohmann::json& j, DeltaEntry& e) {
  try {
    e.instance = j.at("instance").get<std::string>();
    e.key = j.at("key").get<std::string>();
    e.old_value = j.at("old").get<StateValue>();
    e.new_value = j.at("new").get<StateValue>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::SchemaError, std::string("delta entry: ") + ex.what());
  }
}

}  // namespace arena
