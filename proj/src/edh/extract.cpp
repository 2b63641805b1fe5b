#include <set>

#include "arena/core/digest.hpp"
#include "arena/core/error.hpp"
#include "arena/edh/harness.hpp"

namespace arena {

using nlohmann::json;

namespace {

// Replays the log, stopping at the first divergence. `states` receives the
// state before every event plus the final state.
ReplayCheck run_replay(const SessionLog& log, const SceneLibrary& scenes, std::vector<WorldState>* states) {
  WorldState s = initial_state(log, scenes);
  if (state_hash(s) != log.initial_hash) return {false, 0, "initial state hash differs from the recording"};
  if (states) states->push_back(s);
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const LogEvent& e = log.events[i];
    if (e.kind == LogEvent::Kind::Action) {
      auto [next, result] = apply_action(s, e.action);
      if (result.ok != e.ok) return {false, i, "action outcome differs from the recording"};
      if (result_digest(result) != e.result_digest) return {false, i, "action result digest differs from the recording"};
      if (state_hash(next) != e.post_hash) return {false, i, "post-state hash differs from the recording"};
      s = std::move(next);
    }
    if (states) states->push_back(s);
  }
  if (state_hash(s) != log.recorded_final_hash)
    return {false, log.events.size(), "final state hash differs from the recording"};
  return {};
}

[[noreturn]] void broken(const ReplayCheck& c) {
  throw Error(ErrorCode::HashChainBroken, "event " + std::to_string(*c.broken_at) + ": " + c.reason);
}

bool is_follower_world_action(const Action& a) { return !is_user_interaction(a.type) && a.type != ActionType::Stop; }

DialogTurn dialog_turn(const LogEvent& e) {
  return {e.speaker == Role::Commander ? Speaker::User : Speaker::Robot, e.text};
}

std::set<std::string> task_relevant(const SessionLog& log, const std::vector<WorldState>& states,
                                    const MissionCatalog* catalog) {
  std::set<std::string> out;
  const MissionSpec* spec = catalog && log.mission_id ? catalog->find(*log.mission_id) : nullptr;
  if (spec) {
    for (auto& id : referenced_instances(states.front(), *spec)) out.insert(std::move(id));
  } else {
    for (const auto& d : diff_states(states.front(), states.back())) out.insert(d.instance);
  }
  return out;
}

StateDelta restricted(const StateDelta& delta, const std::set<std::string>& relevant) {
  StateDelta out;
  for (const auto& d : delta)
    if (relevant.count(d.instance)) out.insert(d);
  return out;
}

struct Classified {
  std::vector<SegmentCandidate> candidates;
  std::vector<WorldState> states;
  std::set<std::string> relevant;
};

Classified classify(const SessionLog& log, const SceneLibrary& scenes, const MissionCatalog* catalog) {
  Classified c;
  const ReplayCheck check = run_replay(log, scenes, &c.states);
  if (!check.ok) broken(check);
  c.relevant = task_relevant(log, c.states, catalog);

  const auto& events = log.events;
  std::size_t begin = 0;
  std::size_t utterances_before = 0;
  while (begin < events.size()) {
    if (events[begin].kind == LogEvent::Kind::Utterance) {
      ++utterances_before;
      ++begin;
      continue;
    }
    std::size_t end = begin;
    while (end < events.size() && events[end].kind == LogEvent::Kind::Action) ++end;
    if (end == events.size()) break;

    SegmentCandidate cand{begin, end, SegmentVerdict::Accepted};
    bool interaction = false;
    bool outside = false;
    for (std::size_t i = begin; i < end; ++i) {
      const Action& a = events[i].action;
      if (!is_follower_world_action(a)) continue;
      interaction = interaction || is_interaction(a.type);
      outside = outside || !in_edh_subset(a.type);
    }
    if (utterances_before == 0) {
      cand.verdict = SegmentVerdict::EmptyDialogHistory;
    } else if (!interaction) {
      cand.verdict = SegmentVerdict::NoInteraction;
    } else if (restricted(diff_states(c.states[begin], c.states[end]), c.relevant).empty()) {
      cand.verdict = SegmentVerdict::NoTaskRelevantChange;
    } else if (outside) {
      cand.verdict = SegmentVerdict::OutsideActionSubset;
    }
    c.candidates.push_back(cand);
    begin = end;
  }
  return c;
}

json dialog_to_json(const std::vector<DialogTurn>& dialog) {
  json out = json::array();
  for (const auto& d : dialog) out.push_back({{"speaker", d.speaker == Speaker::User ? "commander" : "follower"}, {"text", d.text}});
  return out;
}

std::vector<DialogTurn> dialog_from_json(const json& j) {
  std::vector<DialogTurn> out;
  for (const auto& d : j) {
    const auto who = d.at("speaker").get<std::string>();
    if (who != "commander" && who != "follower") throw Error(ErrorCode::SchemaError, "speaker " + who);
    out.push_back({who == "commander" ? Speaker::User : Speaker::Robot, d.at("text").get<std::string>()});
  }
  return out;
}

}  // namespace

ReplayCheck check_replay(const SessionLog& log, const SceneLibrary& scenes) { return run_replay(log, scenes, nullptr); }

WorldState replay(const SessionLog& log, const SceneLibrary& scenes) {
  std::vector<WorldState> states;
  const ReplayCheck c = run_replay(log, scenes, &states);
  if (!c.ok) broken(c);
  return states.back();
}

std::vector<WorldState> replay_states(const SessionLog& log, const SceneLibrary& scenes) {
  std::vector<WorldState> states;
  const ReplayCheck c = run_replay(log, scenes, &states);
  if (!c.ok) broken(c);
  return states;
}

std::string_view to_string(SegmentVerdict v) {
  switch (v) {
    case SegmentVerdict::Accepted: return "accepted";
    case SegmentVerdict::EmptyDialogHistory: return "empty_dialog_history";
    case SegmentVerdict::NoInteraction: return "no_interaction";
    case SegmentVerdict::NoTaskRelevantChange: return "no_task_relevant_change";
    case SegmentVerdict::OutsideActionSubset: return "outside_action_subset";
  }
  return "?";
}

std::vector<SegmentCandidate> classify_segments(const SessionLog& log, const SceneLibrary& scenes,
                                                const MissionCatalog* catalog) {
  return classify(log, scenes, catalog).candidates;
}

std::vector<EdhInstance> extract_edh_instances(const SessionLog& log, const SceneLibrary& scenes,
                                               const MissionCatalog* catalog) {
  const Classified c = classify(log, scenes, catalog);
  std::vector<EdhInstance> out;
  for (const auto& cand : c.candidates) {
    if (cand.verdict != SegmentVerdict::Accepted) continue;
    EdhInstance inst;
    inst.session_id = log.session_id;
    inst.mission_id = log.mission_id;
    inst.scene_id = log.scene_id;
    inst.scene_overrides = log.scene_overrides;
    inst.split_event = cand.begin;
    for (std::size_t i = 0; i < cand.begin; ++i) {
      const LogEvent& e = log.events[i];
      if (e.kind == LogEvent::Kind::Utterance)
        inst.dialog_history.push_back(dialog_turn(e));
      else
        inst.action_history.push_back({e.action, e.ok});
    }
    for (std::size_t i = cand.begin; i < cand.end; ++i)
      if (is_follower_world_action(log.events[i].action)) inst.reference_actions.push_back(log.events[i].action);
    inst.expected_changes = restricted(diff_states(c.states[cand.begin], c.states[cand.end]), c.relevant);
    inst.initial_state = dynamic_state_to_json(c.states[cand.begin]);
    json content = inst;
    content.erase("instance_id");
    inst.instance_id = "edh-" + sha256_hex(content.dump()).substr(0, 16);
    out.push_back(std::move(inst));
  }
  return out;
}

WorldState instance_state(const EdhInstance& instance, const SceneLibrary& scenes) {
  WorldState s = scenes.get(instance.scene_id);
  apply_scene_overrides(s, instance.scene_overrides);
  return with_dynamic_state(s, instance.initial_state);
}

void to_json(json& j, const EdhInstance& i) {
  json overrides = json::array();
  for (const auto& o : i.scene_overrides) overrides.push_back({{"instance", o.instance}, {"state", o.state}, {"value", o.value}});
  json history = json::array();
  for (const auto& a : i.action_history) history.push_back({{"action", a.action}, {"ok", a.ok}});
  j = json{{"instance_id", i.instance_id},
           {"session_id", i.session_id},
           {"mission_id", i.mission_id ? json(*i.mission_id) : json(nullptr)},
           {"scene_id", i.scene_id},
           {"scene_overrides", overrides},
           {"split_event", i.split_event},
           {"dialog_history", dialog_to_json(i.dialog_history)},
           {"action_history", history},
           {"reference_actions", i.reference_actions},
           {"expected_changes", i.expected_changes},
           {"budget", {{"max_actions", i.budget.max_actions}, {"max_api_failures", i.budget.max_api_failures}}},
           {"initial_state", i.initial_state}};
}

void from_json(const json& j, EdhInstance& i) {
  i.instance_id = j.at("instance_id").get<std::string>();
  i.session_id = j.at("session_id").get<std::string>();
  i.mission_id.reset();
  if (j.contains("mission_id") && !j["mission_id"].is_null()) i.mission_id = j["mission_id"].get<std::string>();
  i.scene_id = j.at("scene_id").get<std::string>();
  i.scene_overrides.clear();
  for (const auto& o : j.at("scene_overrides"))
    i.scene_overrides.push_back({o.at("instance").get<std::string>(), o.at("state").get<std::string>(), o.at("value").get<bool>()});
  i.split_event = j.at("split_event").get<std::size_t>();
  i.dialog_history = dialog_from_json(j.at("dialog_history"));
  i.action_history.clear();
  for (const auto& a : j.at("action_history")) i.action_history.push_back({a.at("action").get<Action>(), a.at("ok").get<bool>()});
  i.reference_actions = j.at("reference_actions").get<std::vector<Action>>();
  i.expected_changes = j.at("expected_changes").get<StateDelta>();
  i.budget.max_actions = j.at("budget").at("max_actions").get<int>();
  i.budget.max_api_failures = j.at("budget").at("max_api_failures").get<int>();
  i.initial_state = j.at("initial_state");
}

json suite_to_json(const std::vector<EdhInstance>& instances) {
  return json{{"schema", kEdhSuiteSchema}, {"instances", instances}};
}

std::vector<EdhInstance> suite_from_json(const json& doc) {
  try {
    const auto schema = doc.at("schema").get<std::string>();
    if (schema != kEdhSuiteSchema) throw Error(ErrorCode::SchemaVersionUnsupported, "EDH suite schema " + schema);
    auto out = doc.at("instances").get<std::vector<EdhInstance>>();
    for (const auto& i : out) {
      if (i.dialog_history.empty()) throw Error(ErrorCode::SchemaError, i.instance_id + ": empty dialog history");
      if (i.expected_changes.empty()) throw Error(ErrorCode::SchemaError, i.instance_id + ": no expected changes");
      if (i.budget.max_actions < 1 || i.budget.max_api_failures < 1)
        throw Error(ErrorCode::SchemaError, i.instance_id + ": budgets must be positive");
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("EDH suite: ") + e.what());
  }
}

}  // namespace arena
