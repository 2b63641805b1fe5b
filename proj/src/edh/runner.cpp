#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "arena/core/error.hpp"
#include "arena/edh/harness.hpp"

namespace arena {

using nlohmann::json;

namespace {

class StopModel : public ModelAdapter {
 public:
  Action next(const EdhContext&) override { return Action::simple(ActionType::Stop); }
};

class SpinModel : public ModelAdapter {
 public:
  Action next(const EdhContext&) override { return Action::simple(ActionType::RotateLeft); }
};

class FailModel : public ModelAdapter {
 public:
  Action next(const EdhContext&) override { return Action::on(ActionType::Pickup, "no_such_object"); }
};

class ReplayModel : public ModelAdapter {
 public:
  ReplayModel(bool stop_at_first_change, const SceneLibrary& scenes) : partial_(stop_at_first_change), scenes_(scenes) {}

  Action next(const EdhContext& ctx) override {
    const auto& ref = ctx.instance.reference_actions;
    if (done_ || i_ >= ref.size()) return Action::simple(ActionType::Stop);
    if (partial_) {
      if (!start_) start_ = instance_state(ctx.instance, scenes_);
      auto [after, result] = apply_action(*start_, ref[i_]);
      start_ = std::move(after);
      for (const auto& d : result.delta) done_ = done_ || ctx.instance.expected_changes.count(d);
    }
    return ref[i_++];
  }

 private:
  bool partial_;
  const SceneLibrary& scenes_;
  bool done_ = false;
  std::size_t i_ = 0;
  std::optional<WorldState> start_;
};

// Services keep per-session memory, so every run gets a session id of its own.
std::atomic<std::uint64_t> g_runs{0};

class InferenceModel : public ModelAdapter {
 public:
  InferenceModel(InferenceClient& client, std::chrono::milliseconds deadline) : client_(client), deadline_(deadline) {}

  Action next(const EdhContext& ctx) override {
    while (queue_.empty()) {
      if (finished_) return Action::simple(ActionType::Stop);
      if (session_id_.empty()) session_id_ = ctx.instance.instance_id + "-run" + std::to_string(++g_runs);
      InferenceRequest req;
      req.session_id = session_id_;
      req.turn_index = 0;
      for (auto it = ctx.dialog_history.rbegin(); it != ctx.dialog_history.rend(); ++it) {
        if (it->speaker == Speaker::User) {
          req.utterance = it->text;
          break;
        }
      }
      req.observation = ctx.observation;
      req.dialog_history = ctx.dialog_history;
      req.action_history = ctx.action_history;
      req.previous_response_id = previous_;
      req.edh = true;
      InferenceResponse resp = client_.infer(req, deadline_);
      validate(resp);
      previous_ = resp.response_id;
      finished_ = resp.turn_complete;
      for (auto& a : resp.actions) queue_.push_back(std::move(a));
    }
    Action a = std::move(queue_.front());
    queue_.pop_front();
    return a;
  }

 private:
  InferenceClient& client_;
  std::chrono::milliseconds deadline_;
  std::string session_id_;
  std::optional<std::string> previous_;
  std::deque<Action> queue_;
  bool finished_ = false;
};

json step_to_json(const PredictedStep& s) {
  json j{{"action", s.action}, {"ok", s.ok}};
  if (s.failure) j["failure"] = std::string(to_string(*s.failure));
  return j;
}

std::string percent(double fraction) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(0) << fraction * 100 << "%";
  return out.str();
}

}  // namespace

ModelFactory builtin_model(std::string_view name, const SceneLibrary& scenes) {
  if (name == "stop") return [] { return std::make_unique<StopModel>(); };
  if (name == "spin") return [] { return std::make_unique<SpinModel>(); };
  if (name == "fail") return [] { return std::make_unique<FailModel>(); };
  if (name == "oracle") return [&scenes] { return std::make_unique<ReplayModel>(false, scenes); };
  if (name == "partial") return [&scenes] { return std::make_unique<ReplayModel>(true, scenes); };
  throw Error(ErrorCode::SchemaError, "unknown built-in model " + std::string(name));
}

std::vector<std::string> builtin_model_names() { return {"fail", "oracle", "partial", "spin", "stop"}; }

ModelFactory inference_model(InferenceClient& client, std::chrono::milliseconds deadline) {
  return [&client, deadline] { return std::make_unique<InferenceModel>(client, deadline); };
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::StopPredicted: return "stop_predicted";
    case Termination::ActionBudget: return "action_budget";
    case Termination::FailureBudget: return "failure_budget";
    case Termination::ModelError: return "model_error";
  }
  return "?";
}

Termination parse_termination(std::string_view s) {
  for (auto t : {Termination::StopPredicted, Termination::ActionBudget, Termination::FailureBudget, Termination::ModelError})
    if (to_string(t) == s) return t;
  throw Error(ErrorCode::SchemaError, "unknown termination " + std::string(s));
}

bool edh_success(const StateDelta& expected, const StateDelta& achieved) {
  return std::includes(achieved.begin(), achieved.end(), expected.begin(), expected.end());
}

double goal_condition_rate(const StateDelta& expected, const StateDelta& achieved) {
  if (expected.empty()) return 1.0;
  std::size_t hit = 0;
  for (const auto& e : expected) hit += achieved.count(e);
  return static_cast<double>(hit) / static_cast<double>(expected.size());
}

EdhResult run_edh(const EdhInstance& instance, ModelAdapter& model, const SceneLibrary& scenes) {
  const WorldState start = instance_state(instance, scenes);
  WorldState state = start;
  std::vector<ActionRecord> history = instance.action_history;
  EdhResult r;
  r.instance_id = instance.instance_id;
  while (true) {
    if (r.api_failures >= instance.budget.max_api_failures) {
      r.termination = Termination::FailureBudget;
      break;
    }
    if (r.executed >= instance.budget.max_actions) {
      r.termination = Termination::ActionBudget;
      break;
    }
    const Observation obs = render_observation(state);
    Action action;
    try {
      action = model.next(EdhContext{instance, instance.dialog_history, history, obs});
    } catch (const std::exception& e) {
      r.termination = Termination::ModelError;
      r.error = Error(ErrorCode::ModelRaised, e.what()).what();
      break;
    }
    if (action.type == ActionType::Stop) {
      r.termination = Termination::StopPredicted;
      break;
    }
    ++r.executed;
    PredictedStep step{action, false, FailureCode::ActionNotApplicable};
    if (in_edh_subset(action.type)) {
      try {
        auto [next, result] = apply_action(state, action);
        state = std::move(next);
        step.ok = result.ok;
        step.failure = result.failure;
      } catch (const Error& e) {
        step.failure = e.code() == ErrorCode::CoordinateOutOfBounds ? FailureCode::TargetNotResolvable
                                                                    : FailureCode::ActionNotApplicable;
      }
    }
    if (!step.ok) ++r.api_failures;
    history.push_back({action, step.ok});
    r.steps.push_back(std::move(step));
  }
  r.achieved_changes = diff_states(start, state);
  r.success = edh_success(instance.expected_changes, r.achieved_changes);
  r.goal_condition_rate = goal_condition_rate(instance.expected_changes, r.achieved_changes);
  return r;
}

SuiteSummary summarize(const std::vector<EdhResult>& results) {
  SuiteSummary s;
  s.instances = results.size();
  if (results.empty()) return s;
  double successes = 0;
  double rates = 0;
  for (const auto& r : results) {
    successes += r.success ? 1 : 0;
    rates += r.goal_condition_rate;
    ++s.terminations[std::string(to_string(r.termination))];
  }
  s.success_rate = successes / static_cast<double>(results.size());
  s.mean_goal_condition_rate = rates / static_cast<double>(results.size());
  return s;
}

SuiteReport evaluate_suite(const std::vector<EdhInstance>& instances, const ModelFactory& factory,
                           const SceneLibrary& scenes, std::string model_name, unsigned threads) {
  if (instances.empty()) throw Error(ErrorCode::EmptySuite, "no EDH instances to evaluate");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(instances.size()));

  std::vector<EdhResult> results(instances.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        auto model = factory();
        results[i] = run_edh(instances[i], *model, scenes);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::sort(results.begin(), results.end(),
            [](const EdhResult& a, const EdhResult& b) { return a.instance_id < b.instance_id; });
  SuiteReport report;
  report.model = std::move(model_name);
  report.summary = summarize(results);
  report.results = std::move(results);
  return report;
}

void to_json(json& j, const EdhResult& r) {
  json steps = json::array();
  for (const auto& s : r.steps) steps.push_back(step_to_json(s));
  j = json{{"instance_id", r.instance_id},
           {"termination", to_string(r.termination)},
           {"executed", r.executed},
           {"api_failures", r.api_failures},
           {"success", r.success},
           {"goal_condition_rate", r.goal_condition_rate},
           {"achieved_changes", r.achieved_changes},
           {"steps", steps}};
  if (r.error) j["error"] = *r.error;
}

void from_json(const json& j, EdhResult& r) {
  r.instance_id = j.at("instance_id").get<std::string>();
  r.termination = parse_termination(j.at("termination").get<std::string>());
  r.executed = j.at("executed").get<int>();
  r.api_failures = j.at("api_failures").get<int>();
  r.success = j.at("success").get<bool>();
  r.goal_condition_rate = j.at("goal_condition_rate").get<double>();
  r.achieved_changes = j.at("achieved_changes").get<StateDelta>();
  r.error.reset();
  if (j.contains("error")) r.error = j["error"].get<std::string>();
  r.steps.clear();
  for (const auto& s : j.at("steps")) {
    PredictedStep step{s.at("action").get<Action>(), s.at("ok").get<bool>(), std::nullopt};
    if (s.contains("failure")) {
      auto code = parse_failure_code(s["failure"].get<std::string>());
      if (!code) throw Error(ErrorCode::SchemaError, "unknown failure code " + s["failure"].dump());
      step.failure = code;
    }
    r.steps.push_back(std::move(step));
  }
}

json report_to_json(const SuiteReport& report) {
  return json{{"schema", kEdhReportSchema},
              {"model", report.model},
              {"summary",
               {{"instances", report.summary.instances},
                {"success_rate", report.summary.success_rate},
                {"mean_goal_condition_rate", report.summary.mean_goal_condition_rate},
                {"terminations", report.summary.terminations}}},
              {"results", report.results}};
}

SuiteReport report_from_json(const json& doc) {
  try {
    const auto schema = doc.at("schema").get<std::string>();
    if (schema != kEdhReportSchema) throw Error(ErrorCode::SchemaVersionUnsupported, "EDH report schema " + schema);
    SuiteReport r;
    r.model = doc.at("model").get<std::string>();
    r.results = doc.at("results").get<std::vector<EdhResult>>();
    r.summary = summarize(r.results);
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("EDH report: ") + e.what());
  }
}

std::string format_report(const SuiteReport& report) {
  std::ostringstream out;
  out << "model: " << report.model << "\n\n";
  out << std::left << std::setw(24) << "instance" << std::setw(16) << "termination" << std::right << std::setw(9)
      << "executed" << std::setw(10) << "failures" << std::setw(9) << "success" << std::setw(9) << "goal" << "\n";
  for (const auto& r : report.results) {
    out << std::left << std::setw(24) << r.instance_id << std::setw(16) << to_string(r.termination) << std::right
        << std::setw(9) << r.executed << std::setw(10) << r.api_failures << std::setw(9) << (r.success ? "yes" : "no")
        << std::setw(9) << percent(r.goal_condition_rate) << "\n";
  }
  out << "\ninstances: " << report.summary.instances << "\n";
  out << "success rate: " << percent(report.summary.success_rate) << "\n";
  out << "mean goal-condition rate: " << percent(report.summary.mean_goal_condition_rate) << "\n";
  for (const auto& [name, n] : report.summary.terminations) out << "termination " << name << ": " << n << "\n";
  return out.str();
}

}  // namespace arena
