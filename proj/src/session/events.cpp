#include "arena/session/events.hpp"

namespace arena {

nlohmann::json SessionEvent::to_json() const {
  nlohmann::json j = body;
  j["seq"] = seq;
  j["type"] = type;
  return j;
}

std::uint64_t EventStream::publish(std::string type, nlohmann::json body) {
  std::uint64_t seq;
  {
    std::lock_guard lock(mu_);
    seq = events_.size();
    events_.push_back(SessionEvent{seq, std::move(type), std::move(body)});
  }
  cv_.notify_all();
  return seq;
}

void EventStream::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool EventStream::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

std::uint64_t EventStream::size() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

std::vector<SessionEvent> EventStream::since(std::uint64_t seq) const {
  std::lock_guard lock(mu_);
  if (seq >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(seq), events_.end()};
}

std::optional<SessionEvent> EventStream::last_frame() const {
  std::lock_guard lock(mu_);
  for (auto it = events_.rbegin(); it != events_.rend(); ++it) {
    if (it->type == "frame") return *it;
  }
  return std::nullopt;
}

std::vector<SessionEvent> EventStream::wait(std::uint64_t seq, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || events_.size() > seq; });
  if (seq >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(seq), events_.end()};
}

}  // namespace arena
