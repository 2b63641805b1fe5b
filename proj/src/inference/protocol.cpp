#include "arena/inference/protocol.hpp"

#include "arena/core/error.hpp"

namespace arena {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedPayload, what); }

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return need(j, key).get<T>();
  } catch (const json::exception& e) {
    malformed(std::string("field '") + key + "': " + e.what());
  }
}

Action action_from(const json& j) {
  try {
    Action a = j.get<Action>();
    arena::validate(a);
    return a;
  } catch (const json::exception& e) {
    malformed(std::string("action: ") + e.what());
  } catch (const Error& e) {
    malformed(e.what());
  }
}

json header(const char* kind) { return json{{"schema", kInferSchema}, {"kind", kind}}; }

void check_header(const json& j, std::string_view kind) {
  if (!j.is_object()) malformed("payload must be a JSON object");
  const auto schema = get_as<std::string>(j, "schema");
  if (schema != kInferSchema) throw Error(ErrorCode::SchemaVersionUnsupported, "schema " + schema);
  if (!kind.empty() && get_as<std::string>(j, "kind") != kind) malformed("expected kind " + std::string(kind));
}

InferenceRequest request_from(const json& j) {
  check_header(j, "request");
  InferenceRequest r;
  r.session_id = get_as<std::string>(j, "session_id");
  r.turn_index = get_as<std::uint64_t>(j, "turn_index");
  r.utterance = get_as<std::string>(j, "utterance");
  r.observation = get_as<Observation>(j, "observation");
  for (const auto& d : get_as<json>(j, "dialog_history")) {
    const auto speaker = get_as<std::string>(d, "speaker");
    if (speaker != "user" && speaker != "robot") malformed("speaker must be user or robot");
    r.dialog_history.push_back({speaker == "user" ? Speaker::User : Speaker::Robot, get_as<std::string>(d, "text")});
  }
  for (const auto& a : get_as<json>(j, "action_history")) {
    r.action_history.push_back({action_from(need(a, "action")), get_as<bool>(a, "ok")});
  }
  if (j.contains("previous_response_id") && !j["previous_response_id"].is_null())
    r.previous_response_id = get_as<std::string>(j, "previous_response_id");
  if (j.contains("alternatives")) r.alternatives = get_as<std::vector<std::string>>(j, "alternatives");
  if (j.contains("edh")) r.edh = get_as<bool>(j, "edh");
  validate(r);
  return r;
}

InferenceResponse response_from(const json& j) {
  check_header(j, "response");
  InferenceResponse r;
  r.response_id = get_as<std::string>(j, "response_id");
  const auto& actions = need(j, "actions");
  if (!actions.is_array()) malformed("actions must be an array");
  for (const auto& a : actions) r.actions.push_back(action_from(a));
  if (j.contains("dialog") && !j["dialog"].is_null()) r.dialog = get_as<std::string>(j, "dialog");
  r.turn_complete = get_as<bool>(j, "turn_complete");
  validate(r);
  return r;
}

json parse_json(std::string_view bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    malformed(std::string("not valid JSON: ") + e.what());
  }
}

}  // namespace

InferenceResponse InferenceResponse::act(std::string id, std::vector<Action> actions) {
  return {std::move(id), std::move(actions), std::nullopt, false};
}

InferenceResponse InferenceResponse::end(std::string id, std::optional<std::string> dialog) {
  return {std::move(id), {}, std::move(dialog), true};
}

void validate(const InferenceResponse& r) {
  if (r.actions.size() > kMaxActionsPerResponse)
    malformed("response carries " + std::to_string(r.actions.size()) + " actions, limit is 10");
  for (std::size_t i = 0; i < r.actions.size(); ++i) {
    if (r.actions[i].type == ActionType::Stop && (i + 1 != r.actions.size() || !r.turn_complete))
      malformed("Stop must be the last action of a turn-completing response");
  }
  if (r.turn_complete) {
    if (!r.actions.empty() && r.dialog) malformed("a turn-completing response cannot carry both actions and dialog");
  } else {
    if (r.actions.empty()) malformed("an open-turn response must carry actions");
    if (r.dialog) malformed("dialog is only allowed on a turn-completing response");
  }
}

void validate(const InferenceRequest& r) {
  if (r.utterance.empty()) malformed("utterance must be non-empty");
  if (r.session_id.empty()) malformed("session_id must be non-empty");
}

json to_wire(const InferenceRequest& r) {
  json j = header("request");
  j["session_id"] = r.session_id;
  j["turn_index"] = r.turn_index;
  j["utterance"] = r.utterance;
  j["observation"] = r.observation;
  j["dialog_history"] = json::array();
  for (const auto& d : r.dialog_history)
    j["dialog_history"].push_back({{"speaker", d.speaker == Speaker::User ? "user" : "robot"}, {"text", d.text}});
  j["action_history"] = json::array();
  for (const auto& a : r.action_history) j["action_history"].push_back({{"action", a.action}, {"ok", a.ok}});
  j["previous_response_id"] = r.previous_response_id ? json(*r.previous_response_id) : json(nullptr);
  j["alternatives"] = r.alternatives;
  j["edh"] = r.edh;
  return j;
}

json to_wire(const InferenceResponse& r) {
  json j = header("response");
  j["response_id"] = r.response_id;
  j["actions"] = json::array();
  for (const auto& a : r.actions) j["actions"].push_back(a);
  j["dialog"] = r.dialog ? json(*r.dialog) : json(nullptr);
  j["turn_complete"] = r.turn_complete;
  return j;
}

std::string serialize(const InferenceRequest& r) { return to_wire(r).dump(); }
std::string serialize(const InferenceResponse& r) { return to_wire(r).dump(); }

WireMessage parse_wire(std::string_view bytes) {
  const json j = parse_json(bytes);
  check_header(j, "");
  const auto kind = get_as<std::string>(j, "kind");
  if (kind == "request") return request_from(j);
  if (kind == "response") return response_from(j);
  malformed("unknown kind " + kind);
}

InferenceRequest parse_request(std::string_view bytes) { return request_from(parse_json(bytes)); }
InferenceResponse parse_response(std::string_view bytes) { return response_from(parse_json(bytes)); }

}  // namespace arena
