#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/core/action.hpp"
#include "arena/core/world.hpp"
#include "arena/missions/mission.hpp"

namespace arena {

inline constexpr std::string_view kSessionLogSchema = "arena-session-log/1";

enum class Role { Commander, Follower };

struct LogEvent {
  enum class Kind { Utterance, Action };
  Kind kind = Kind::Utterance;
  Role speaker = Role::Commander;  // Utterance
  std::string text;                // Utterance
  Action action;                   // Action
  bool ok = true;                  // Action
  std::string result_digest;       // Action
  std::string post_hash;           // Action: state_hash after applying

  static LogEvent utterance(Role who, std::string text);
  static LogEvent acted(Action a, bool ok, std::string result_digest, std::string post_hash);

  friend bool operator==(const LogEvent&, const LogEvent&) = default;
};

// A recorded session: enough to rebuild every intermediate state.
struct SessionLog {
  std::string session_id;
  std::optional<std::string> mission_id;
  std::string scene_id;
  std::vector<SceneOverride> scene_overrides;
  std::string initial_hash;
  std::vector<LogEvent> events;
  std::string recorded_final_hash;

  friend bool operator==(const SessionLog&, const SessionLog&) = default;
};

nlohmann::json to_json(const SessionLog& log);
SessionLog session_log_from_json(const nlohmann::json& doc);  // throws SchemaError / SchemaVersionUnsupported
// Canonical bytes: two-space indented JSON plus a trailing newline.
std::string canonical_log_text(const SessionLog& log);
SessionLog load_session_log(const std::filesystem::path& path);

// Scene plus overrides, tick 0.
WorldState initial_state(const SessionLog& log, const SceneLibrary& scenes);

}  // namespace arena
