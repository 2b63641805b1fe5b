#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/core/observation.hpp"
#include "arena/core/simulator.hpp"
#include "arena/edh/session_log.hpp"
#include "arena/inference/protocol.hpp"
#include "arena/metrics/records.hpp"
#include "arena/missions/mission.hpp"
#include "arena/session/events.hpp"
#include "arena/session/store.hpp"

namespace arena {

inline constexpr std::string_view kRatingPrompt = "How would you rate your interaction with the robot?";
inline constexpr std::string_view kTimeoutDialog = "Sorry, I'm having trouble thinking right now. Please try again.";
inline constexpr std::string_view kProtocolErrorDialog = "Sorry, something went wrong on my side. Please try again.";

struct TurnLimits {
  int max_actions_per_turn = 50;
  int max_failures_per_turn = 10;
  std::chrono::milliseconds inference_deadline{10000};
  int max_inference_rounds_per_turn = 10;

  void validate() const;  // throws SchemaError unless all positive
};

enum class SessionStatus { Active, MissionComplete, Abandoned, Ended };
std::string_view to_string(SessionStatus s);
SessionStatus parse_session_status(std::string_view s);

struct Rating {
  int score = 0;
  std::optional<std::string> comment;
  friend bool operator==(const Rating&, const Rating&) = default;
};

struct InferenceRound {
  std::string request_digest;  // SHA-256 of the serialized request
  InferenceResponse response;
  friend bool operator==(const InferenceRound&, const InferenceRound&) = default;
};

struct ExecutedAction {
  Action action;
  ActionResult result;
};

struct TurnRecord {
  std::uint64_t turn_index = 0;
  std::string utterance;
  std::vector<InferenceRound> rounds;
  std::vector<ExecutedAction> executed;
  std::optional<std::string> robot_dialog;
  MissionStatus mission_status_after;
  std::int64_t wall_time_ms = 0;
  // turn_complete, stop, mission_complete, action_limit, failure_limit,
  // round_limit, timeout, protocol_error
  std::string end_reason;
};

void to_json(nlohmann::json& j, const TurnRecord& t);
void from_json(const nlohmann::json& j, TurnRecord& t);

using Clock = std::function<Timestamp()>;
Timestamp system_now();

struct SessionConfig {
  TurnLimits limits;
  std::chrono::seconds abandon_after{15 * 60};
  std::size_t max_active_sessions = 64;
  std::string team_id = "baseline";
  int highlight_ms = 1500;
};

// Runs missions for many concurrent sessions: inference loop, frame
// streaming, goal checks, ratings and persistence.
class SessionManager {
 public:
  SessionManager(SessionConfig config, const MissionCatalog& catalog, const SceneLibrary& scenes, InferenceClient& client,
                 SessionStore* store = nullptr, RecordSink* records = nullptr, Clock clock = system_now);
  ~SessionManager();

  struct Created {
    std::string session_id;
    Observation observation;
  };

  // Routes sessions of `team_id` to `client` instead of the default one.
  void add_team(const std::string& team_id, InferenceClient& client);
  std::vector<std::string> teams() const;

  // Throws MissionNotFound, CapacityExceeded, and SchemaError for an unknown
  // team. An empty team selects the configured default team.
  Created create_session(const std::string& mission_id, const std::string& team_id = "");
  // Throws SessionNotFound, SessionClosed, TurnInFlight.
  TurnRecord handle_utterance(const std::string& session_id, const std::string& text);
  // Throws SessionNotFound, ScoreOutOfRange, RatingAlreadySubmitted, SessionNotRatable.
  void submit_rating(const std::string& session_id, int score, std::optional<std::string> comment);
  // User quits: an active session becomes ended (and ratable).
  void end_session(const std::string& session_id);
  // Finalizes sessions idle longer than abandon_after; returns how many.
  std::size_t sweep_abandoned();

  std::shared_ptr<const EventStream> events(const std::string& session_id) const;
  // Throws SessionActive while the session is still playable.
  SessionLog export_log(const std::string& session_id) const;

  SessionStatus status(const std::string& session_id) const;
  std::optional<Rating> rating(const std::string& session_id) const;
  std::vector<TurnRecord> turns(const std::string& session_id) const;
  WorldState world(const std::string& session_id) const;
  nlohmann::json describe(const std::string& session_id) const;
  std::vector<std::string> session_ids() const;

  const MissionCatalog& catalog() const { return catalog_; }
  const SessionConfig& config() const { return config_; }

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  void persist(const Session& s) const;
  void restore(const nlohmann::json& doc);
  void finalize(Session& s, bool with_rating);
  void publish_frames(Session& s, const WorldState& next, const ActionResult& r);

  SessionConfig config_;
  const MissionCatalog& catalog_;
  const SceneLibrary& scenes_;
  SessionStore* store_;
  RecordSink* records_;
  Clock clock_;

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::map<std::string, InferenceClient*> clients_;
  std::uint64_t next_id_ = 1;
};

}  // namespace arena
