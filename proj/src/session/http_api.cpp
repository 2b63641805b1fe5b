#include "arena/session/http_api.hpp"

#include <httplib.h>

namespace arena {

using nlohmann::json;

namespace {

json mission_summary(const MissionSpec& m) {
  return json{{"mission_id", m.mission_id},
              {"title", m.title},
              {"user_briefing", m.user_briefing},
              {"scene_id", m.scene_id},
              {"tag", m.seen ? "seen" : "unseen"},
              {"subgoals", m.subgoals.size()}};
}

void reply(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, const Error& e) {
  reply(res, {{"error", std::string(to_string(e.code()))}, {"message", e.what()}}, http_status(e.code()));
}

json parse_body(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::MalformedPayload, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedPayload, std::string("request body is not valid JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::MalformedPayload, std::string("missing field ") + key);
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::MalformedPayload, std::string("field ") + key + " has the wrong type");
  }
}

// Runs a handler and turns arena errors into JSON error replies.
template <typename F>
auto guarded(F f) {
  return [f = std::move(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      reply_error(res, e);
    }
  };
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissionNotFound:
    case ErrorCode::SessionNotFound: return 404;
    case ErrorCode::TurnInFlight:
    case ErrorCode::SessionActive:
    case ErrorCode::SessionClosed:
    case ErrorCode::RatingAlreadySubmitted:
    case ErrorCode::SessionNotRatable: return 409;
    case ErrorCode::ScoreOutOfRange:
    case ErrorCode::SchemaError:
    case ErrorCode::MalformedPayload: return 400;
    case ErrorCode::CapacityExceeded: return 503;
    case ErrorCode::InferenceTimeout: return 504;
    case ErrorCode::InferenceProtocolError: return 502;
    default: return 500;
  }
}

void SessionApi::mount(httplib::Server& server) {
  server.Get("/missions", guarded([this](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& m : manager_.catalog().missions()) out.push_back(mission_summary(m));
    reply(res, out);
  }));

  server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    const auto mission_id = field<std::string>(body, "mission_id");
    const auto team = body.contains("team_id") ? field<std::string>(body, "team_id") : std::string();
    const auto created = manager_.create_session(mission_id, team);
    json out = manager_.describe(created.session_id);
    out["mission"] = mission_summary(manager_.catalog().get(mission_id));
    out["observation"] = created.observation;
    reply(res, out, 201);
  }));

  server.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    reply(res, manager_.describe(req.matches[1]));
  }));

  server.Post(R"(/sessions/([^/]+)/utterance)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    const auto text = field<std::string>(body, "text");
    const TurnRecord turn = manager_.handle_utterance(req.matches[1], text);
    json out = turn;
    out["status"] = to_string(manager_.status(req.matches[1]));
    reply(res, out);
  }));

  server.Post(R"(/sessions/([^/]+)/rating)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    std::optional<std::string> comment;
    if (body.contains("comment") && !body["comment"].is_null()) comment = field<std::string>(body, "comment");
    manager_.submit_rating(req.matches[1], field<int>(body, "score"), std::move(comment));
    reply(res, manager_.describe(req.matches[1]));
  }));

  server.Post(R"(/sessions/([^/]+)/end)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    manager_.end_session(req.matches[1]);
    reply(res, manager_.describe(req.matches[1]));
  }));

  server.Get(R"(/sessions/([^/]+)/log)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    res.set_content(canonical_log_text(manager_.export_log(req.matches[1])), "application/json");
  }));

  server.Get(R"(/sessions/([^/]+)/events)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto stream = manager_.events(req.matches[1]);
    const bool follow = !req.has_param("follow") || req.get_param_value("follow") != "0";
    std::uint64_t next = stream->size();
    std::string head;
    if (req.has_param("from")) {
      try {
        next = std::stoull(req.get_param_value("from"));
      } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedPayload, "from must be an event sequence number");
      }
    } else if (auto frame = stream->last_frame()) {
      json snapshot = frame->to_json();
      snapshot["snapshot"] = true;
      head = snapshot.dump() + "\n";
    }
    res.set_chunked_content_provider(
        "application/x-ndjson", [this, stream, follow, next, head](std::size_t, httplib::DataSink& sink) mutable {
          if (!head.empty()) {
            if (!sink.write(head.data(), head.size())) return false;
            head.clear();
          }
          while (!stopping_ && sink.is_writable()) {
            auto events = follow ? stream->wait(next, poll_interval) : stream->since(next);
            for (const auto& e : events) {
              const std::string line = e.to_json().dump() + "\n";
              if (!sink.write(line.data(), line.size())) return false;
              next = e.seq + 1;
            }
            if (!follow || (stream->closed() && next >= stream->size())) break;
          }
          sink.done();
          return true;
        });
  }));
}

}  // namespace arena
