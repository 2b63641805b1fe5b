#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/core/action.hpp"
#include "arena/core/world.hpp"

namespace arena {

inline constexpr std::string_view kMissionSchema = "arena-mission/1";

// Matches one instance by id, or any instance of a class.
struct ObjectSelector {
  enum class Kind { Instance, Class };
  Kind kind = Kind::Instance;
  std::string name;

  static ObjectSelector instance(std::string id) { return {Kind::Instance, std::move(id)}; }
  static ObjectSelector of_class(std::string cls) { return {Kind::Class, std::move(cls)}; }

  bool matches(const ObjectInstance& obj) const;
  friend bool operator==(const ObjectSelector&, const ObjectSelector&) = default;
};

enum class ConditionType { StateEquals, ContainedIn, HeldBy, InRoom };

std::string_view to_string(ConditionType t);

struct GoalCondition {
  ConditionType type = ConditionType::StateEquals;
  ObjectSelector object;
  std::string key;                // StateEquals
  bool value = true;              // StateEquals
  ObjectSelector receptacle;      // ContainedIn
  std::string room;               // InRoom

  static GoalCondition state_equals(ObjectSelector o, std::string key, bool value);
  static GoalCondition contained_in(ObjectSelector o, ObjectSelector receptacle);
  static GoalCondition held_by(ObjectSelector o);
  static GoalCondition in_room(ObjectSelector o, std::string room);

  friend bool operator==(const GoalCondition&, const GoalCondition&) = default;
};

struct Subgoal {
  std::string description;
  std::vector<GoalCondition> conditions;  // all must hold
  friend bool operator==(const Subgoal&, const Subgoal&) = default;
};

struct SceneOverride {
  std::string instance;
  std::string state;
  bool value = true;
  friend bool operator==(const SceneOverride&, const SceneOverride&) = default;
};

struct MissionSpec {
  std::string mission_id;
  std::string title;
  std::string user_briefing;
  std::string scene_id;
  bool seen = true;
  std::vector<SceneOverride> scene_overrides;
  std::vector<Subgoal> subgoals;
  // Scripted action sequence that solves the mission, and the tick at which
  // the goal check first reports success while replaying it.
  std::vector<Action> solution;
  std::uint64_t solution_completes_at = 0;

  friend bool operator==(const MissionSpec&, const MissionSpec&) = default;
};

struct MissionStatus {
  std::vector<bool> subgoals;
  bool overall = false;
  std::optional<std::uint64_t> completed_tick;

  friend bool operator==(const MissionStatus&, const MissionStatus&) = default;
};

MissionSpec mission_from_json(const nlohmann::json& doc);
nlohmann::json mission_to_json(const MissionSpec& spec);
// Canonical file bytes: two-space indented JSON plus a trailing newline.
std::string canonical_mission_text(const MissionSpec& spec);

void to_json(nlohmann::json& j, const MissionStatus& s);
void from_json(const nlohmann::json& j, MissionStatus& s);

// Applies state patches in order. Throws OverrideUnlicensed, DanglingReference.
void apply_scene_overrides(WorldState& state, const std::vector<SceneOverride>& overrides);

// Scene with overrides applied, tick 0. Throws SceneNotFound,
// OverrideUnlicensed, DanglingReference.
WorldState init_mission(const MissionSpec& spec, const SceneLibrary& scenes);

// Pure. completed_tick is the state's tick when every subgoal holds.
// Throws SelectorUnresolvable when a selector matches nothing in the state.
MissionStatus check_goals(const WorldState& state, const MissionSpec& spec);

bool condition_holds(const WorldState& state, const GoalCondition& c);

// Ids of every instance any condition of the mission can refer to.
std::vector<std::string> referenced_instances(const WorldState& state, const MissionSpec& spec);

// Static checks (selectors resolve, state keys licensed), unsolved at init,
// and the scripted solution completes exactly at solution_completes_at.
// Throws Error{CatalogError or the underlying code} on the first problem.
void validate_mission(const MissionSpec& spec, const SceneLibrary& scenes);

// Replays the solution and returns the first tick where the mission is
// complete, or nullopt.
std::optional<std::uint64_t> replay_solution(const MissionSpec& spec, const SceneLibrary& scenes);

class MissionCatalog {
 public:
  MissionCatalog() = default;
  explicit MissionCatalog(std::vector<MissionSpec> missions);

  // Loads every *.json file; any per-file problem fails the whole load with
  // one CatalogError listing all of them.
  static MissionCatalog load(const std::filesystem::path& dir, const SceneLibrary& scenes);

  const std::vector<MissionSpec>& missions() const { return missions_; }  // sorted by id
  const MissionSpec* find(std::string_view id) const;
  const MissionSpec& get(std::string_view id) const;  // throws MissionNotFound
  std::size_t size() const { return missions_.size(); }

 private:
  std::vector<MissionSpec> missions_;
};

}  // namespace arena
