#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/core/delta.hpp"
#include "arena/core/simulator.hpp"
#include "arena/edh/session_log.hpp"
#include "arena/inference/protocol.hpp"
#include "arena/missions/mission.hpp"

namespace arena {

inline constexpr std::string_view kEdhSuiteSchema = "arena-edh-suite/1";
inline constexpr std::string_view kEdhReportSchema = "arena-edh-report/1";

// ---------------------------------------------------------------- replay

struct ReplayCheck {
  bool ok = true;
  // Index into log.events of the first divergent action event;
  // log.events.size() when only the recorded final hash disagrees.
  std::optional<std::size_t> broken_at;
  std::string reason;
};

// Re-executes every action event and compares result digests and post-state
// hashes against the recording.
ReplayCheck check_replay(const SessionLog& log, const SceneLibrary& scenes);

// Final state of the replayed log. Throws Error{HashChainBroken} naming the
// first divergent event index.
WorldState replay(const SessionLog& log, const SceneLibrary& scenes);

// States before the first event and after each event (utterances repeat the
// previous state). Throws like replay().
std::vector<WorldState> replay_states(const SessionLog& log, const SceneLibrary& scenes);

// ------------------------------------------------------------ instances

struct EdhBudget {
  int max_actions = 1000;
  int max_api_failures = 30;
  friend bool operator==(const EdhBudget&, const EdhBudget&) = default;
};

struct EdhInstance {
  std::string instance_id;
  std::string session_id;
  std::optional<std::string> mission_id;
  std::string scene_id;
  std::vector<SceneOverride> scene_overrides;
  // Index of the first event of the target segment in the source log.
  std::size_t split_event = 0;
  std::vector<DialogTurn> dialog_history;
  std::vector<ActionRecord> action_history;
  // The annotated Follower actions of the target segment.
  std::vector<Action> reference_actions;
  StateDelta expected_changes;
  EdhBudget budget;
  // Dynamic state at the split point.
  nlohmann::json initial_state;

  friend bool operator==(const EdhInstance&, const EdhInstance&) = default;
};

void to_json(nlohmann::json& j, const EdhInstance& i);
void from_json(const nlohmann::json& j, EdhInstance& i);

// Materializes the instance's start state.
WorldState instance_state(const EdhInstance& instance, const SceneLibrary& scenes);

// Why a candidate segment was dropped.
enum class SegmentVerdict { Accepted, EmptyDialogHistory, NoInteraction, NoTaskRelevantChange, OutsideActionSubset };
std::string_view to_string(SegmentVerdict v);

struct SegmentCandidate {
  std::size_t begin = 0;  // first event index of the segment
  std::size_t end = 0;    // one past the last action event
  SegmentVerdict verdict = SegmentVerdict::Accepted;
};

// Candidate target segments: the action runs that follow the log start and
// each utterance and are closed by the next utterance. Trailing actions with
// no closing utterance are not candidates. Segments whose Follower actions
// use verbs outside the EDH action subset are dropped as unreachable for an
// EDH model; Dialog and Highlight are not Follower world actions and are
// left out of the reference actions.
std::vector<SegmentCandidate> classify_segments(const SessionLog& log, const SceneLibrary& scenes,
                                                const MissionCatalog* catalog = nullptr);

// One instance per accepted segment, in log order. Task-relevant objects are
// those the log's mission refers to when `catalog` knows it, otherwise every
// object whose state differs between the first and last state of the log.
std::vector<EdhInstance> extract_edh_instances(const SessionLog& log, const SceneLibrary& scenes,
                                               const MissionCatalog* catalog = nullptr);

nlohmann::json suite_to_json(const std::vector<EdhInstance>& instances);
std::vector<EdhInstance> suite_from_json(const nlohmann::json& doc);  // throws SchemaError / SchemaVersionUnsupported

// --------------------------------------------------------------- models

struct EdhContext {
  const EdhInstance& instance;
  const std::vector<DialogTurn>& dialog_history;
  // Instance history followed by the model's own executed actions.
  const std::vector<ActionRecord>& action_history;
  const Observation& observation;
};

// Predicts the Follower's next action. One adapter serves one instance run.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;
  virtual Action next(const EdhContext& context) = 0;
};

using ModelFactory = std::function<std::unique_ptr<ModelAdapter>()>;

// Built-in models:
//   stop     predicts Stop at once
//   spin     rotates left forever
//   fail     picks up an object that does not exist, forever
//   oracle   replays the reference actions, then Stop
//   partial  replays the reference actions up to the first one that
//            realizes an expected change, then Stop
ModelFactory builtin_model(std::string_view name, const SceneLibrary& scenes);  // throws SchemaError
std::vector<std::string> builtin_model_names();

// Drives an inference service in EDH mode. Each request carries the last
// Commander utterance, the dialog and action histories and the current
// observation; returned action batches are consumed one action at a time and
// a turn-ending reply with no actions counts as Stop.
ModelFactory inference_model(InferenceClient& client, std::chrono::milliseconds deadline);

// -------------------------------------------------------------- running

enum class Termination { StopPredicted, ActionBudget, FailureBudget, ModelError };
std::string_view to_string(Termination t);
Termination parse_termination(std::string_view s);

struct PredictedStep {
  Action action;
  bool ok = true;
  std::optional<FailureCode> failure;
  friend bool operator==(const PredictedStep&, const PredictedStep&) = default;
};

struct EdhResult {
  std::string instance_id;
  std::vector<PredictedStep> steps;
  int executed = 0;
  int api_failures = 0;
  Termination termination = Termination::StopPredicted;
  std::optional<std::string> error;  // ModelRaised message
  StateDelta achieved_changes;
  bool success = false;
  double goal_condition_rate = 0;

  friend bool operator==(const EdhResult&, const EdhResult&) = default;
};

void to_json(nlohmann::json& j, const EdhResult& r);
void from_json(const nlohmann::json& j, EdhResult& r);

// expected ⊆ achieved, and |expected ∩ achieved| / |expected|.
bool edh_success(const StateDelta& expected, const StateDelta& achieved);
double goal_condition_rate(const StateDelta& expected, const StateDelta& achieved);

// Runs the model until it predicts Stop, the action budget is spent or the
// failure budget is spent. Actions outside the EDH action subset count as
// failed actions without touching the world. A throwing model ends the run
// with Termination::ModelError.
EdhResult run_edh(const EdhInstance& instance, ModelAdapter& model, const SceneLibrary& scenes);

struct SuiteSummary {
  std::size_t instances = 0;
  double success_rate = 0;
  double mean_goal_condition_rate = 0;
  std::map<std::string, std::size_t> terminations;
  friend bool operator==(const SuiteSummary&, const SuiteSummary&) = default;
};

struct SuiteReport {
  std::string model;
  SuiteSummary summary;
  std::vector<EdhResult> results;  // sorted by instance_id
};

// Runs every instance with a fresh adapter on `threads` workers. Throws
// Error{EmptySuite}.
SuiteReport evaluate_suite(const std::vector<EdhInstance>& instances, const ModelFactory& factory,
                           const SceneLibrary& scenes, std::string model_name, unsigned threads = 0);

SuiteSummary summarize(const std::vector<EdhResult>& results);

nlohmann::json report_to_json(const SuiteReport& report);
SuiteReport report_from_json(const nlohmann::json& doc);
// Plain-text per-instance table plus the summary lines.
std::string format_report(const SuiteReport& report);

}  // namespace arena
