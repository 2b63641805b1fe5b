#include "arena/session/scripted.hpp"

#include <deque>

#include "arena/core/error.hpp"

namespace arena {

using nlohmann::json;

namespace {

struct ScriptedTurn {
  std::string utterance;
  std::deque<InferenceResponse> responses;
};

class TurnScriptClient : public InferenceClient {
 public:
  void load(std::deque<InferenceResponse> responses) { pending_ = std::move(responses); }

  InferenceResponse infer(const InferenceRequest&, std::chrono::milliseconds) override {
    if (pending_.empty()) throw Error(ErrorCode::InferenceProtocolError, "script has no response left for this turn");
    InferenceResponse r = std::move(pending_.front());
    pending_.pop_front();
    return r;
  }

 private:
  std::deque<InferenceResponse> pending_;
};

std::vector<ScriptedTurn> parse_turns(const json& script) {
  std::vector<ScriptedTurn> turns;
  std::size_t n = 0;
  for (const auto& t : script.at("turns")) {
    ScriptedTurn turn{t.at("utterance").get<std::string>(), {}};
    for (const auto& r : t.at("responses")) {
      InferenceResponse resp;
      resp.response_id = "r" + std::to_string(++n);
      if (r.contains("actions")) resp.actions = r["actions"].get<std::vector<Action>>();
      if (r.contains("dialog") && !r["dialog"].is_null()) resp.dialog = r["dialog"].get<std::string>();
      resp.turn_complete = r.value("turn_complete", false);
      validate(resp);
      turn.responses.push_back(std::move(resp));
    }
    turns.push_back(std::move(turn));
  }
  return turns;
}

}  // namespace

SessionLog record_scripted_session(const json& script, const MissionCatalog& catalog, const SceneLibrary& scenes) {
  std::string mission_id;
  std::vector<ScriptedTurn> turns;
  try {
    const auto schema = script.at("schema").get<std::string>();
    if (schema != kSessionScriptSchema) throw Error(ErrorCode::SchemaVersionUnsupported, "session script schema " + schema);
    mission_id = script.at("mission_id").get<std::string>();
    turns = parse_turns(script);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("session script: ") + e.what());
  }
  TurnScriptClient client;
  SessionManager manager(SessionConfig{}, catalog, scenes, client);
  const std::string id = manager.create_session(mission_id).session_id;
  for (auto& turn : turns) {
    if (manager.status(id) != SessionStatus::Active) throw Error(ErrorCode::SchemaError, "script continues after the session closed");
    client.load(std::move(turn.responses));
    manager.handle_utterance(id, turn.utterance);
  }
  if (manager.status(id) == SessionStatus::Active) manager.end_session(id);
  return manager.export_log(id);
}

}  // namespace arena
