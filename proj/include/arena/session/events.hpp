#pragma once

#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace arena {

// One server-push event. `body` holds the type-specific fields.
struct SessionEvent {
  std::uint64_t seq = 0;  // position in the session's stream
  std::string type;       // frame, robot_dialog, highlight, subgoal_complete,
                          // mission_complete, turn_ended, mic_open
  nlohmann::json body = nlohmann::json::object();

  nlohmann::json to_json() const;
};

// Single-producer multi-consumer event log for one session. Every event is
// kept so that readers can replay from any position.
class EventStream {
 public:
  // Appends and wakes readers; returns the assigned seq.
  std::uint64_t publish(std::string type, nlohmann::json body);
  void close();
  bool closed() const;

  std::uint64_t size() const;
  std::vector<SessionEvent> since(std::uint64_t seq) const;
  // Latest frame event, if any.
  std::optional<SessionEvent> last_frame() const;

  // Blocks until an event with seq >= `seq` exists, the stream closes or
  // the timeout passes. Returns the events available from `seq`.
  std::vector<SessionEvent> wait(std::uint64_t seq, std::chrono::milliseconds timeout) const;

 private:
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<SessionEvent> events_;
  bool closed_ = false;
};

}  // namespace arena
