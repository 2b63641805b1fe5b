#include "arena/missions/mission.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "arena/core/error.hpp"
#include "arena/core/simulator.hpp"

namespace arena {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string string_field(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) schema_error(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

bool bool_field(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_boolean()) schema_error(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

ObjectSelector selector_from_json(const json& j) {
  if (j.is_object() && j.size() == 1 && j.contains("id") && j["id"].is_string())
    return ObjectSelector::instance(j["id"].get<std::string>());
  if (j.is_object() && j.size() == 1 && j.contains("class") && j["class"].is_string())
    return ObjectSelector::of_class(j["class"].get<std::string>());
  schema_error("selector must be {\"id\": ...} or {\"class\": ...}");
}

json selector_to_json(const ObjectSelector& s) {
  return json{{s.kind == ObjectSelector::Kind::Instance ? "id" : "class", s.name}};
}

constexpr std::pair<ConditionType, std::string_view> kConditionNames[] = {
    {ConditionType::StateEquals, "state_equals"},
    {ConditionType::ContainedIn, "contained_in"},
    {ConditionType::HeldBy, "held"},
    {ConditionType::InRoom, "in_room"},
};

GoalCondition condition_from_json(const json& j) {
  const auto type = string_field(j, "type");
  GoalCondition c;
  c.object = selector_from_json(field(j, "object"));
  if (type == "state_equals") {
    c.type = ConditionType::StateEquals;
    c.key = string_field(j, "key");
    c.value = bool_field(j, "value");
  } else if (type == "contained_in") {
    c.type = ConditionType::ContainedIn;
    c.receptacle = selector_from_json(field(j, "receptacle"));
  } else if (type == "held") {
    c.type = ConditionType::HeldBy;
  } else if (type == "in_room") {
    c.type = ConditionType::InRoom;
    c.room = string_field(j, "room");
  } else {
    schema_error("unknown condition type '" + type + "'");
  }
  return c;
}

json condition_to_json(const GoalCondition& c) {
  json j{{"type", to_string(c.type)}, {"object", selector_to_json(c.object)}};
  switch (c.type) {
    case ConditionType::StateEquals:
      j["key"] = c.key;
      j["value"] = c.value;
      break;
    case ConditionType::ContainedIn: j["receptacle"] = selector_to_json(c.receptacle); break;
    case ConditionType::HeldBy: break;
    case ConditionType::InRoom: j["room"] = c.room; break;
  }
  return j;
}

std::vector<const ObjectInstance*> select(const WorldState& s, const ObjectSelector& sel) {
  std::vector<const ObjectInstance*> out;
  for (const auto& [id, obj] : s.objects) {
    if (sel.matches(obj)) out.push_back(&obj);
  }
  if (out.empty()) throw Error(ErrorCode::SelectorUnresolvable, "selector " + sel.name + " matches nothing");
  return out;
}

}  // namespace

bool ObjectSelector::matches(const ObjectInstance& obj) const {
  return kind == Kind::Instance ? obj.id == name : obj.cls->name == name;
}

std::string_view to_string(ConditionType t) {
  for (const auto& [k, n] : kConditionNames) {
    if (k == t) return n;
  }
  return "?";
}

GoalCondition GoalCondition::state_equals(ObjectSelector o, std::string key, bool value) {
  GoalCondition c;
  c.type = ConditionType::StateEquals;
  c.object = std::move(o);
  c.key = std::move(key);
  c.value = value;
  return c;
}

GoalCondition GoalCondition::contained_in(ObjectSelector o, ObjectSelector receptacle) {
  GoalCondition c;
  c.type = ConditionType::ContainedIn;
  c.object = std::move(o);
  c.receptacle = std::move(receptacle);
  return c;
}

GoalCondition GoalCondition::held_by(ObjectSelector o) {
  GoalCondition c;
  c.type = ConditionType::HeldBy;
  c.object = std::move(o);
  return c;
}

GoalCondition GoalCondition::in_room(ObjectSelector o, std::string room) {
  GoalCondition c;
  c.type = ConditionType::InRoom;
  c.object = std::move(o);
  c.room = std::move(room);
  return c;
}

MissionSpec mission_from_json(const json& doc) {
  if (!doc.is_object()) schema_error("mission document must be an object");
  const auto schema = string_field(doc, "schema");
  if (schema != kMissionSchema) throw Error(ErrorCode::SchemaVersionUnsupported, "mission schema " + schema);
  MissionSpec m;
  m.mission_id = string_field(doc, "mission_id");
  m.title = string_field(doc, "title");
  m.user_briefing = string_field(doc, "user_briefing");
  m.scene_id = string_field(doc, "scene_id");
  const auto tag = string_field(doc, "tag");
  if (tag != "seen" && tag != "unseen") schema_error("tag must be seen or unseen");
  m.seen = tag == "seen";
  if (doc.contains("scene_overrides")) {
    for (const auto& o : doc["scene_overrides"]) {
      m.scene_overrides.push_back({string_field(o, "instance"), string_field(o, "state"), bool_field(o, "value")});
    }
  }
  const auto& subgoals = field(doc, "subgoals");
  if (!subgoals.is_array() || subgoals.empty()) schema_error("mission needs at least one subgoal");
  for (const auto& sg : subgoals) {
    Subgoal s{string_field(sg, "description"), {}};
    const auto& conds = field(sg, "conditions");
    if (!conds.is_array() || conds.empty()) schema_error("subgoal needs at least one condition");
    for (const auto& c : conds) s.conditions.push_back(condition_from_json(c));
    m.subgoals.push_back(std::move(s));
  }
  const auto& sol = field(doc, "solution");
  for (const auto& a : field(sol, "actions")) {
    Action act;
    try {
      act = a.get<Action>();
    } catch (const json::exception& e) {
      schema_error(std::string("solution action: ") + e.what());
    }
    m.solution.push_back(std::move(act));
  }
  const auto& at = field(sol, "completes_at_tick");
  if (!at.is_number_unsigned()) schema_error("completes_at_tick must be a non-negative integer");
  m.solution_completes_at = at.get<std::uint64_t>();
  return m;
}

json mission_to_json(const MissionSpec& m) {
  json overrides = json::array();
  for (const auto& o : m.scene_overrides) overrides.push_back({{"instance", o.instance}, {"state", o.state}, {"value", o.value}});
  json subgoals = json::array();
  for (const auto& s : m.subgoals) {
    json conds = json::array();
    for (const auto& c : s.conditions) conds.push_back(condition_to_json(c));
    subgoals.push_back({{"description", s.description}, {"conditions", conds}});
  }
  json actions = json::array();
  for (const auto& a : m.solution) actions.push_back(a);
  return json{{"schema", kMissionSchema},
              {"mission_id", m.mission_id},
              {"title", m.title},
              {"user_briefing", m.user_briefing},
              {"scene_id", m.scene_id},
              {"tag", m.seen ? "seen" : "unseen"},
              {"scene_overrides", overrides},
              {"subgoals", subgoals},
              {"solution", {{"actions", actions}, {"completes_at_tick", m.solution_completes_at}}}};
}

std::string canonical_mission_text(const MissionSpec& spec) { return mission_to_json(spec).dump(2) + "\n"; }

void to_json(json& j, const MissionStatus& s) {
  j = json{{"subgoals", s.subgoals}, {"overall", s.overall}};
  j["completed_tick"] = s.completed_tick ? json(*s.completed_tick) : json(nullptr);
}

void from_json(const json& j, MissionStatus& s) {
  s.subgoals = j.at("subgoals").get<std::vector<bool>>();
  s.overall = j.at("overall").get<bool>();
  s.completed_tick.reset();
  if (j.contains("completed_tick") && !j["completed_tick"].is_null()) s.completed_tick = j["completed_tick"].get<std::uint64_t>();
}

void apply_scene_overrides(WorldState& s, const std::vector<SceneOverride>& overrides) {
  for (const auto& o : overrides) {
    auto it = s.objects.find(o.instance);
    if (it == s.objects.end()) throw Error(ErrorCode::DanglingReference, "override target " + o.instance);
    if (!it->second.cls->licenses_state(o.state))
      throw Error(ErrorCode::OverrideUnlicensed, o.instance + " (" + it->second.cls->name + ") has no state " + o.state);
    it->second.states[o.state] = o.value;
  }
}

WorldState init_mission(const MissionSpec& spec, const SceneLibrary& scenes) {
  WorldState s = scenes.get(spec.scene_id);
  apply_scene_overrides(s, spec.scene_overrides);
  s.tick = 0;
  return s;
}

bool condition_holds(const WorldState& s, const GoalCondition& c) {
  const auto objects = select(s, c.object);
  switch (c.type) {
    case ConditionType::StateEquals:
      return std::any_of(objects.begin(), objects.end(), [&](auto* o) { return o->state(c.key) == c.value; });
    case ConditionType::ContainedIn: {
      const auto receptacles = select(s, c.receptacle);
      return std::any_of(objects.begin(), objects.end(), [&](auto* o) {
        return o->contained_in &&
               std::any_of(receptacles.begin(), receptacles.end(), [&](auto* r) { return r->id == *o->contained_in; });
      });
    }
    case ConditionType::HeldBy:
      return std::any_of(objects.begin(), objects.end(), [](auto* o) { return o->held; });
    case ConditionType::InRoom:
      return std::any_of(objects.begin(), objects.end(), [&](auto* o) { return s.effective_room(*o) == c.room; });
  }
  return false;
}

MissionStatus check_goals(const WorldState& state, const MissionSpec& spec) {
  MissionStatus st;
  st.overall = true;
  for (const auto& sg : spec.subgoals) {
    bool ok = true;
    for (const auto& c : sg.conditions) ok = condition_holds(state, c) && ok;
    st.subgoals.push_back(ok);
    st.overall = st.overall && ok;
  }
  if (st.overall) st.completed_tick = state.tick;
  return st;
}

std::vector<std::string> referenced_instances(const WorldState& s, const MissionSpec& spec) {
  std::set<std::string> ids;
  auto add = [&](const ObjectSelector& sel) {
    for (const auto& [id, obj] : s.objects) {
      if (sel.matches(obj)) ids.insert(id);
    }
  };
  for (const auto& sg : spec.subgoals) {
    for (const auto& c : sg.conditions) {
      add(c.object);
      if (c.type == ConditionType::ContainedIn) add(c.receptacle);
    }
  }
  return {ids.begin(), ids.end()};
}

std::optional<std::uint64_t> replay_solution(const MissionSpec& spec, const SceneLibrary& scenes) {
  WorldState s = init_mission(spec, scenes);
  for (const auto& a : spec.solution) {
    s = apply_action(s, a).first;
    if (check_goals(s, spec).overall) return s.tick;
  }
  return std::nullopt;
}

void validate_mission(const MissionSpec& spec, const SceneLibrary& scenes) {
  auto fail = [&](const std::string& what) { throw Error(ErrorCode::CatalogError, spec.mission_id + ": " + what); };
  const WorldState s = init_mission(spec, scenes);
  for (const auto& sg : spec.subgoals) {
    for (const auto& c : sg.conditions) {
      const auto objects = select(s, c.object);
      if (c.type == ConditionType::StateEquals) {
        for (auto* o : objects) {
          if (!o->cls->licenses_state(c.key)) fail(o->cls->name + " has no state " + c.key);
        }
      } else if (c.type == ConditionType::ContainedIn) {
        for (auto* r : select(s, c.receptacle)) {
          if (!r->cls->has(AffordanceProperty::Receptacle)) fail(r->id + " is not a receptacle");
        }
      } else if (c.type == ConditionType::InRoom && !s.layout->find_room(c.room)) {
        throw Error(ErrorCode::SelectorUnresolvable, "room " + c.room);
      }
    }
  }
  if (check_goals(s, spec).overall) fail("mission is already solved at init");
  const auto done = replay_solution(spec, scenes);
  if (!done) fail("scripted solution does not complete the mission");
  if (*done != spec.solution_completes_at)
    fail("scripted solution completes at tick " + std::to_string(*done) + ", documented " +
         std::to_string(spec.solution_completes_at));
}

MissionCatalog::MissionCatalog(std::vector<MissionSpec> missions) : missions_(std::move(missions)) {
  std::sort(missions_.begin(), missions_.end(),
            [](const MissionSpec& a, const MissionSpec& b) { return a.mission_id < b.mission_id; });
  for (std::size_t i = 1; i < missions_.size(); ++i) {
    if (missions_[i].mission_id == missions_[i - 1].mission_id)
      throw Error(ErrorCode::DuplicateId, "duplicate mission_id " + missions_[i].mission_id);
  }
}

MissionCatalog MissionCatalog::load(const std::filesystem::path& dir, const SceneLibrary& scenes) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::IoError, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<MissionSpec> missions;
  std::vector<std::string> problems;
  for (const auto& f : files) {
    try {
      std::ifstream in(f);
      const auto doc = json::parse(in);
      auto m = mission_from_json(doc);
      validate_mission(m, scenes);
      missions.push_back(std::move(m));
    } catch (const json::exception& e) {
      problems.push_back(f.filename().string() + ": " + e.what());
    } catch (const Error& e) {
      problems.push_back(f.filename().string() + ": " + e.what());
    }
  }
  std::set<std::string> ids;
  for (const auto& m : missions) {
    if (!ids.insert(m.mission_id).second) problems.push_back("duplicate mission_id " + m.mission_id);
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << problems.size() << " invalid mission file(s)";
    for (const auto& p : problems) msg << "\n  " << p;
    throw Error(ErrorCode::CatalogError, msg.str());
  }
  return MissionCatalog(std::move(missions));
}

const MissionSpec* MissionCatalog::find(std::string_view id) const {
  for (const auto& m : missions_) {
    if (m.mission_id == id) return &m;
  }
  return nullptr;
}

const MissionSpec& MissionCatalog::get(std::string_view id) const {
  if (const auto* m = find(id)) return *m;
  throw Error(ErrorCode::MissionNotFound, "unknown mission " + std::string(id));
}

}  // namespace arena
