#include "arena/edh/session_log.hpp"

#include <fstream>

#include "arena/core/error.hpp"

namespace arena {

using nlohmann::json;

LogEvent LogEvent::utterance(Role who, std::string text) {
  LogEvent e;
  e.kind = Kind::Utterance;
  e.speaker = who;
  e.text = std::move(text);
  return e;
}

LogEvent LogEvent::acted(Action a, bool ok, std::string result_digest, std::string post_hash) {
  LogEvent e;
  e.kind = Kind::Action;
  e.action = std::move(a);
  e.ok = ok;
  e.result_digest = std::move(result_digest);
  e.post_hash = std::move(post_hash);
  return e;
}

json to_json(const SessionLog& log) {
  json events = json::array();
  for (const auto& e : log.events) {
    if (e.kind == LogEvent::Kind::Utterance) {
      events.push_back({{"type", "utterance"},
                        {"speaker", e.speaker == Role::Commander ? "commander" : "follower"},
                        {"text", e.text}});
    } else {
      events.push_back({{"type", "action"},
                        {"action", e.action},
                        {"ok", e.ok},
                        {"result_digest", e.result_digest},
                        {"post_hash", e.post_hash}});
    }
  }
  json overrides = json::array();
  for (const auto& o : log.scene_overrides) overrides.push_back({{"instance", o.instance}, {"state", o.state}, {"value", o.value}});
  return json{{"schema", kSessionLogSchema},
              {"session_id", log.session_id},
              {"mission_id", log.mission_id ? json(*log.mission_id) : json(nullptr)},
              {"scene_id", log.scene_id},
              {"scene_overrides", overrides},
              {"initial_hash", log.initial_hash},
              {"events", events},
              {"recorded_final_hash", log.recorded_final_hash}};
}

SessionLog session_log_from_json(const json& doc) {
  try {
    const auto schema = doc.at("schema").get<std::string>();
    if (schema != kSessionLogSchema) throw Error(ErrorCode::SchemaVersionUnsupported, "session log schema " + schema);
    SessionLog log;
    log.session_id = doc.at("session_id").get<std::string>();
    if (doc.contains("mission_id") && !doc["mission_id"].is_null()) log.mission_id = doc["mission_id"].get<std::string>();
    log.scene_id = doc.at("scene_id").get<std::string>();
    for (const auto& o : doc.at("scene_overrides"))
      log.scene_overrides.push_back({o.at("instance").get<std::string>(), o.at("state").get<std::string>(), o.at("value").get<bool>()});
    log.initial_hash = doc.at("initial_hash").get<std::string>();
    for (const auto& e : doc.at("events")) {
      const auto type = e.at("type").get<std::string>();
      if (type == "utterance") {
        const auto who = e.at("speaker").get<std::string>();
        if (who != "commander" && who != "follower") throw Error(ErrorCode::SchemaError, "speaker " + who);
        log.events.push_back(LogEvent::utterance(who == "commander" ? Role::Commander : Role::Follower, e.at("text").get<std::string>()));
      } else if (type == "action") {
        log.events.push_back(LogEvent::acted(e.at("action").get<Action>(), e.at("ok").get<bool>(),
                                             e.at("result_digest").get<std::string>(), e.at("post_hash").get<std::string>()));
      } else {
        throw Error(ErrorCode::SchemaError, "unknown log event type " + type);
      }
    }
    log.recorded_final_hash = doc.at("recorded_final_hash").get<std::string>();
    return log;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("session log: ") + e.what());
  }
}

std::string canonical_log_text(const SessionLog& log) { return to_json(log).dump(2) + "\n"; }

SessionLog load_session_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return session_log_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, path.string() + ": " + e.what());
  }
}

WorldState initial_state(const SessionLog& log, const SceneLibrary& scenes) {
  WorldState s = scenes.get(log.scene_id);
  apply_scene_overrides(s, log.scene_overrides);
  s.tick = 0;
  return s;
}

}  // namespace arena
