#include "arena/session/orchestrator.hpp"

#include <algorithm>
#include <cstdio>

#include "arena/core/digest.hpp"
#include "arena/core/error.hpp"

namespace arena {

using nlohmann::json;

namespace {

constexpr std::pair<SessionStatus, std::string_view> kStatusNames[] = {
    {SessionStatus::Active, "active"},
    {SessionStatus::MissionComplete, "mission_complete"},
    {SessionStatus::Abandoned, "abandoned"},
    {SessionStatus::Ended, "ended"},
};

json optional_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<std::string>();
}

}  // namespace

void TurnLimits::validate() const {
  if (max_actions_per_turn <= 0 || max_failures_per_turn <= 0 || inference_deadline.count() <= 0 ||
      max_inference_rounds_per_turn <= 0)
    throw Error(ErrorCode::SchemaError, "turn limits must all be positive");
}

std::string_view to_string(SessionStatus s) {
  for (const auto& [k, n] : kStatusNames) {
    if (k == s) return n;
  }
  return "?";
}

SessionStatus parse_session_status(std::string_view s) {
  for (const auto& [k, n] : kStatusNames) {
    if (n == s) return k;
  }
  throw Error(ErrorCode::SchemaError, "unknown session status " + std::string(s));
}

Timestamp system_now() { return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()); }

void to_json(json& j, const TurnRecord& t) {
  json rounds = json::array();
  for (const auto& r : t.rounds) rounds.push_back({{"request_digest", r.request_digest}, {"response", to_wire(r.response)}});
  json executed = json::array();
  for (const auto& e : t.executed) executed.push_back({{"action", e.action}, {"result", e.result}});
  j = json{{"turn_index", t.turn_index},
           {"utterance", t.utterance},
           {"rounds", rounds},
           {"executed", executed},
           {"robot_dialog", optional_json(t.robot_dialog)},
           {"mission_status_after", t.mission_status_after},
           {"wall_time_ms", t.wall_time_ms},
           {"end_reason", t.end_reason}};
}

void from_json(const json& j, TurnRecord& t) {
  t.turn_index = j.at("turn_index").get<std::uint64_t>();
  t.utterance = j.at("utterance").get<std::string>();
  t.rounds.clear();
  for (const auto& r : j.at("rounds"))
    t.rounds.push_back({r.at("request_digest").get<std::string>(), parse_response(r.at("response").dump())});
  t.executed.clear();
  for (const auto& e : j.at("executed")) t.executed.push_back({e.at("action").get<Action>(), e.at("result").get<ActionResult>()});
  t.robot_dialog = optional_string(j, "robot_dialog");
  t.mission_status_after = j.at("mission_status_after").get<MissionStatus>();
  t.wall_time_ms = j.at("wall_time_ms").get<std::int64_t>();
  t.end_reason = j.at("end_reason").get<std::string>();
}

struct SessionManager::Session {
  mutable std::mutex mu;
  std::atomic<bool> in_flight{false};

  std::string id;
  std::string team_id;
  InferenceClient* client = nullptr;
  const MissionSpec* mission = nullptr;
  WorldState world;
  SessionStatus status = SessionStatus::Active;
  std::vector<TurnRecord> turns;
  std::optional<Rating> rating;
  Timestamp created_at{};
  Timestamp last_activity{};
  std::optional<Timestamp> ended_at;
  std::optional<std::uint64_t> completed_tick;
  std::vector<bool> subgoals_done;
  std::vector<DialogTurn> dialog;
  std::vector<ActionRecord> actions;
  std::vector<LogEvent> log;
  std::string initial_hash;
  std::optional<std::string> previous_response_id;
  bool finalized = false;
  std::shared_ptr<EventStream> stream = std::make_shared<EventStream>();

  json to_doc() const {
    json log_events = json::array();
    SessionLog tmp;
    tmp.events = log;
    json turns_json = json::array();
    for (const auto& t : turns) turns_json.push_back(t);
    json dlg = json::array();
    for (const auto& d : dialog) dlg.push_back({{"speaker", d.speaker == Speaker::User ? "user" : "robot"}, {"text", d.text}});
    json acts = json::array();
    for (const auto& a : actions) acts.push_back({{"action", a.action}, {"ok", a.ok}});
    return json{{"session_id", id},
                {"mission_id", mission->mission_id},
                {"team_id", team_id},
                {"status", to_string(status)},
                {"world", dynamic_state_to_json(world)},
                {"turns", turns_json},
                {"rating", rating ? json{{"score", rating->score}, {"comment", optional_json(rating->comment)}} : json(nullptr)},
                {"created_at", format_timestamp(created_at)},
                {"last_activity", format_timestamp(last_activity)},
                {"ended_at", ended_at ? json(format_timestamp(*ended_at)) : json(nullptr)},
                {"completed_tick", completed_tick ? json(*completed_tick) : json(nullptr)},
                {"subgoals_done", subgoals_done},
                {"dialog", dlg},
                {"actions", acts},
                {"log", to_json(tmp)["events"]},
                {"initial_hash", initial_hash},
                {"previous_response_id", optional_json(previous_response_id)},
                {"finalized", finalized}};
  }
};

SessionManager::SessionManager(SessionConfig config, const MissionCatalog& catalog, const SceneLibrary& scenes,
                               InferenceClient& client, SessionStore* store, RecordSink* records, Clock clock)
    : config_(std::move(config)),
      catalog_(catalog),
      scenes_(scenes),
      store_(store),
      records_(records),
      clock_(std::move(clock)) {
  config_.limits.validate();
  clients_[config_.team_id] = &client;
  if (store_) {
    for (const auto& doc : store_->load_all()) restore(doc);
  }
}

SessionManager::~SessionManager() {
  std::lock_guard lock(mu_);
  for (auto& [id, s] : sessions_) s->stream->close();
}

void SessionManager::restore(const json& doc) {
  auto s = std::make_shared<Session>();
  s->id = doc.at("session_id").get<std::string>();
  s->mission = &catalog_.get(doc.at("mission_id").get<std::string>());
  s->team_id = doc.value("team_id", config_.team_id);
  auto client = clients_.find(s->team_id);
  s->client = client == clients_.end() ? clients_.at(config_.team_id) : client->second;
  s->world = with_dynamic_state(init_mission(*s->mission, scenes_), doc.at("world"));
  s->status = parse_session_status(doc.at("status").get<std::string>());
  for (const auto& t : doc.at("turns")) s->turns.push_back(t.get<TurnRecord>());
  if (!doc.at("rating").is_null())
    s->rating = Rating{doc["rating"].at("score").get<int>(), optional_string(doc["rating"], "comment")};
  s->created_at = parse_timestamp(doc.at("created_at").get<std::string>());
  s->last_activity = parse_timestamp(doc.at("last_activity").get<std::string>());
  if (!doc.at("ended_at").is_null()) s->ended_at = parse_timestamp(doc["ended_at"].get<std::string>());
  if (!doc.at("completed_tick").is_null()) s->completed_tick = doc["completed_tick"].get<std::uint64_t>();
  s->subgoals_done = doc.at("subgoals_done").get<std::vector<bool>>();
  for (const auto& d : doc.at("dialog"))
    s->dialog.push_back({d.at("speaker") == "user" ? Speaker::User : Speaker::Robot, d.at("text").get<std::string>()});
  for (const auto& a : doc.at("actions")) s->actions.push_back({a.at("action").get<Action>(), a.at("ok").get<bool>()});
  json log_doc = to_json(SessionLog{});
  log_doc["events"] = doc.at("log");
  s->log = session_log_from_json(log_doc).events;
  s->initial_hash = doc.at("initial_hash").get<std::string>();
  s->previous_response_id = optional_string(doc, "previous_response_id");
  s->finalized = doc.at("finalized").get<bool>();
  s->stream->publish("frame", {{"observation", render_observation(s->world)}});
  if (s->finalized) s->stream->close();

  unsigned long long n = 0;
  if (std::sscanf(s->id.c_str(), "s%llu", &n) == 1) next_id_ = std::max<std::uint64_t>(next_id_, n + 1);
  sessions_[s->id] = std::move(s);
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::SessionNotFound, "unknown session " + id);
  return it->second;
}

void SessionManager::persist(const Session& s) const {
  if (store_) store_->put(s.id, s.to_doc());
}

void SessionManager::add_team(const std::string& team_id, InferenceClient& client) {
  std::lock_guard lock(mu_);
  clients_[team_id] = &client;
  for (auto& [id, s] : sessions_) {
    if (s->team_id == team_id) s->client = &client;
  }
}

std::vector<std::string> SessionManager::teams() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [team, c] : clients_) out.push_back(team);
  return out;
}

SessionManager::Created SessionManager::create_session(const std::string& mission_id, const std::string& team_id) {
  const MissionSpec& mission = catalog_.get(mission_id);
  auto s = std::make_shared<Session>();
  s->team_id = team_id.empty() ? config_.team_id : team_id;
  s->mission = &mission;
  s->world = init_mission(mission, scenes_);
  s->status = SessionStatus::Active;
  s->created_at = s->last_activity = clock_();
  s->initial_hash = state_hash(s->world);
  s->subgoals_done = check_goals(s->world, mission).subgoals;
  const Observation obs = render_observation(s->world);
  {
    std::lock_guard lock(mu_);
    const auto active = std::count_if(sessions_.begin(), sessions_.end(),
                                      [](const auto& kv) { return kv.second->status == SessionStatus::Active; });
    auto client = clients_.find(s->team_id);
    if (client == clients_.end()) throw Error(ErrorCode::SchemaError, "unknown team " + s->team_id);
    s->client = client->second;
    if (static_cast<std::size_t>(active) >= config_.max_active_sessions)
      throw Error(ErrorCode::CapacityExceeded, "too many active sessions");
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(next_id_++));
    s->id = buf;
    sessions_[s->id] = s;
  }
  s->stream->publish("frame", {{"observation", obs}});
  s->stream->publish("mic_open", json::object());
  persist(*s);
  return {s->id, obs};
}

void SessionManager::publish_frames(Session& s, const WorldState& next, const ActionResult& r) {
  WorldState view = next;
  for (const auto& pose : r.frames) {
    view.agent = pose;
    s.stream->publish("frame", {{"observation", render_observation(view)}});
  }
}

TurnRecord SessionManager::handle_utterance(const std::string& session_id, const std::string& text) {
  auto sp = find(session_id);
  Session& s = *sp;
  if (text.empty()) throw Error(ErrorCode::MalformedPayload, "utterance must be non-empty");
  if (s.in_flight.exchange(true)) throw Error(ErrorCode::TurnInFlight, "a turn is already running for " + session_id);
  struct Release {
    std::atomic<bool>& flag;
    ~Release() { flag = false; }
  } release{s.in_flight};

  const auto started = std::chrono::steady_clock::now();
  std::unique_lock lock(s.mu);
  if (s.status != SessionStatus::Active)
    throw Error(ErrorCode::SessionClosed, session_id + " is " + std::string(to_string(s.status)));

  const auto& limits = config_.limits;
  TurnRecord turn;
  turn.turn_index = s.turns.size();
  turn.utterance = text;
  s.last_activity = clock_();
  s.dialog.push_back({Speaker::User, text});
  s.log.push_back(LogEvent::utterance(Role::Commander, text));

  auto say = [&](const std::string& line) {
    turn.robot_dialog = turn.robot_dialog ? *turn.robot_dialog + " " + line : line;
    s.dialog.push_back({Speaker::Robot, line});
    s.log.push_back(LogEvent::utterance(Role::Follower, line));
    s.stream->publish("robot_dialog", {{"text", line}});
  };

  int failures = 0;
  for (int round = 0; turn.end_reason.empty(); ++round) {
    if (round == limits.max_inference_rounds_per_turn) {
      turn.end_reason = "round_limit";
      break;
    }
    InferenceRequest req;
    req.session_id = s.id;
    req.turn_index = turn.turn_index;
    req.utterance = text;
    req.observation = render_observation(s.world);
    req.dialog_history = s.dialog;
    req.action_history = s.actions;
    req.previous_response_id = s.previous_response_id;
    const std::string request_digest = sha256_hex(serialize(req));

    InferenceResponse resp;
    lock.unlock();
    try {
      resp = s.client->infer(req, limits.inference_deadline);
      validate(resp);
      lock.lock();
    } catch (const Error& e) {
      lock.lock();
      if (e.code() == ErrorCode::InferenceTimeout) {
        turn.end_reason = "timeout";
        say(std::string(kTimeoutDialog));
      } else if (e.code() == ErrorCode::InferenceProtocolError || e.code() == ErrorCode::MalformedPayload ||
                 e.code() == ErrorCode::SchemaVersionUnsupported) {
        turn.end_reason = "protocol_error";
        say(std::string(kProtocolErrorDialog));
      } else {
        throw;
      }
      break;
    }
    turn.rounds.push_back({request_digest, resp});
    s.previous_response_id = resp.response_id;

    for (const auto& action : resp.actions) {
      if (static_cast<int>(turn.executed.size()) == limits.max_actions_per_turn) {
        turn.end_reason = "action_limit";
        break;
      }
      auto [next, result] = apply_action(s.world, action);
      publish_frames(s, next, result);
      if (result.highlighted)
        s.stream->publish("highlight", {{"instance", *result.highlighted}, {"duration_ms", config_.highlight_ms}});
      s.log.push_back(LogEvent::acted(action, result.ok, result_digest(result), state_hash(next)));
      s.actions.push_back({action, result.ok});
      s.world = std::move(next);
      turn.executed.push_back({action, result});
      if (action.type == ActionType::Dialog && result.ok) say(action.text);

      const MissionStatus st = check_goals(s.world, *s.mission);
      for (std::size_t i = 0; i < st.subgoals.size(); ++i) {
        if (st.subgoals[i] && !s.subgoals_done[i]) s.stream->publish("subgoal_complete", {{"index", i}});
      }
      s.subgoals_done = st.subgoals;
      if (st.overall) {
        s.status = SessionStatus::MissionComplete;
        s.completed_tick = s.world.tick;
        s.ended_at = clock_();
        s.stream->publish("mission_complete", {{"tick", s.world.tick}, {"rating_prompt", kRatingPrompt}});
        turn.end_reason = "mission_complete";
        break;
      }
      if (action.type == ActionType::Stop) {
        turn.end_reason = "stop";
        break;
      }
      if (!result.ok && ++failures == limits.max_failures_per_turn) {
        turn.end_reason = "failure_limit";
        break;
      }
    }
    if (!turn.end_reason.empty()) break;
    if (resp.dialog) say(*resp.dialog);
    if (resp.turn_complete) turn.end_reason = "turn_complete";
  }

  turn.mission_status_after = check_goals(s.world, *s.mission);
  turn.wall_time_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
  s.turns.push_back(turn);
  s.last_activity = clock_();
  s.stream->publish("turn_ended", {{"turn_index", turn.turn_index}, {"reason", turn.end_reason}});
  if (s.status == SessionStatus::Active) s.stream->publish("mic_open", json::object());
  persist(s);
  return turn;
}

void SessionManager::finalize(Session& s, bool with_rating) {
  if (!s.ended_at) s.ended_at = clock_();
  s.finalized = true;
  if (records_) {
    InteractionRecord r;
    r.team_id = s.team_id;
    r.timestamp = *s.ended_at;
    r.mission_id = s.mission->mission_id;
    r.mission_seen = s.mission->seen;
    r.success = s.status == SessionStatus::MissionComplete;
    if (with_rating && s.rating) r.rating = s.rating->score;
    records_->append(r);
  }
  s.stream->close();
}

void SessionManager::submit_rating(const std::string& session_id, int score, std::optional<std::string> comment) {
  auto sp = find(session_id);
  std::lock_guard lock(sp->mu);
  if (score < 1 || score > 5) throw Error(ErrorCode::ScoreOutOfRange, "score must be 1-5, got " + std::to_string(score));
  if (sp->rating) throw Error(ErrorCode::RatingAlreadySubmitted, session_id + " already rated");
  if (sp->finalized || (sp->status != SessionStatus::MissionComplete && sp->status != SessionStatus::Ended))
    throw Error(ErrorCode::SessionNotRatable, session_id + " is " + std::string(to_string(sp->status)));
  sp->rating = Rating{score, std::move(comment)};
  sp->last_activity = clock_();
  finalize(*sp, true);
  persist(*sp);
}

void SessionManager::end_session(const std::string& session_id) {
  auto sp = find(session_id);
  if (sp->in_flight) throw Error(ErrorCode::TurnInFlight, "a turn is running for " + session_id);
  std::lock_guard lock(sp->mu);
  if (sp->status != SessionStatus::Active) return;
  sp->status = SessionStatus::Ended;
  sp->ended_at = sp->last_activity = clock_();
  persist(*sp);
}

std::size_t SessionManager::sweep_abandoned() {
  std::vector<std::shared_ptr<Session>> all;
  {
    std::lock_guard lock(mu_);
    for (auto& [id, s] : sessions_) all.push_back(s);
  }
  const auto now = clock_();
  std::size_t n = 0;
  for (auto& sp : all) {
    if (sp->in_flight) continue;
    std::lock_guard lock(sp->mu);
    if (sp->finalized || now - sp->last_activity <= config_.abandon_after) continue;
    if (sp->status == SessionStatus::Active) {
      sp->status = SessionStatus::Abandoned;
      sp->ended_at = now;
    }
    finalize(*sp, false);
    persist(*sp);
    ++n;
  }
  return n;
}

std::shared_ptr<const EventStream> SessionManager::events(const std::string& session_id) const {
  return find(session_id)->stream;
}

SessionLog SessionManager::export_log(const std::string& session_id) const {
  auto sp = find(session_id);
  std::lock_guard lock(sp->mu);
  if (sp->status == SessionStatus::Active) throw Error(ErrorCode::SessionActive, session_id + " is still active");
  SessionLog log;
  log.session_id = sp->id;
  log.mission_id = sp->mission->mission_id;
  log.scene_id = sp->mission->scene_id;
  log.scene_overrides = sp->mission->scene_overrides;
  log.initial_hash = sp->initial_hash;
  log.events = sp->log;
  log.recorded_final_hash = state_hash(sp->world);
  return log;
}

SessionStatus SessionManager::status(const std::string& session_id) const {
  auto sp = find(session_id);
  std::lock_guard lock(sp->mu);
  return sp->status;
}

std::optional<Rating> SessionManager::rating(const std::string& session_id) const {
  auto sp = find(session_id);
  std::lock_guard lock(sp->mu);
  return sp->rating;
}

std::vector<TurnRecord> SessionManager::turns(const std::string& session_id) const {
  auto sp = find(session_id);
  std::lock_guard lock(sp->mu);
  return sp->turns;
}

WorldState SessionManager::world(const std::string& session_id) const {
  auto sp = find(session_id);
  std::lock_guard lock(sp->mu);
  return sp->world;
}

json SessionManager::describe(const std::string& session_id) const {
  auto sp = find(session_id);
  std::lock_guard lock(sp->mu);
  const auto& s = *sp;
  return json{{"session_id", s.id},
              {"mission_id", s.mission->mission_id},
              {"team_id", s.team_id},
              {"title", s.mission->title},
              {"status", to_string(s.status)},
              {"turns", s.turns.size()},
              {"subgoals_done", s.subgoals_done},
              {"completed_tick", s.completed_tick ? json(*s.completed_tick) : json(nullptr)},
              {"rating", s.rating ? json{{"score", s.rating->score}, {"comment", optional_json(s.rating->comment)}} : json(nullptr)},
              {"created_at", format_timestamp(s.created_at)},
              {"ended_at", s.ended_at ? json(format_timestamp(*s.ended_at)) : json(nullptr)},
              {"state_hash", state_hash(s.world)}};
}

std::vector<std::string> SessionManager::session_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

}  // namespace arena
