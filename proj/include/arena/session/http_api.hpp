#pragma once

#include <atomic>
#include <chrono>

#include "arena/core/error.hpp"
#include "arena/session/orchestrator.hpp"

namespace httplib {
class Server;
}

namespace arena {

// HTTP status used for each error code in JSON error replies.
int http_status(ErrorCode code);

// REST and NDJSON streaming front end of a SessionManager:
//   GET  /missions
//   POST /sessions                  {mission_id, team_id?}
//   GET  /sessions/{id}
//   POST /sessions/{id}/utterance   {text}
//   GET  /sessions/{id}/events      ?from=<seq>&follow=0|1
//   POST /sessions/{id}/rating      {score, comment?}
//   POST /sessions/{id}/end
//   GET  /sessions/{id}/log
class SessionApi {
 public:
  explicit SessionApi(SessionManager& manager) : manager_(manager) {}

  void mount(httplib::Server& server);
  // Ends every open event stream so that the server can stop.
  void shutdown() { stopping_ = true; }

  // How long a following stream waits for new events before checking for
  // shutdown or a closed client.
  std::chrono::milliseconds poll_interval{200};

 private:
  SessionManager& manager_;
  std::atomic<bool> stopping_{false};
};

}  // namespace arena
