#pragma once

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arena/inference/lexicon.hpp"
#include "arena/inference/memory.hpp"
#include "arena/inference/protocol.hpp"

namespace arena {

// Upper bound on responses the baseline sends within one turn; the last one
// always completes the turn.
inline constexpr std::size_t kMaxResponsesPerTurn = 5;

inline constexpr std::string_view kFallbackDialog =
    "I can help with actions like picking up or opening objects \u2014 what should I do?";

// One grounded step of a plan.
struct Intent {
  enum class Kind { Act, Goto, GotoRoom, Move, Stop };
  Kind kind = Kind::Act;
  ActionType verb = ActionType::Stop;
  std::optional<std::string> class_name;  // absent: the current focus
  std::string surface;                    // noun as the user said it
  std::optional<std::string> room;
  std::optional<std::string> instance;    // fixed after disambiguation
};

// Everything the baseline remembers about one session between requests.
struct BaselineBelief {
  VisualMemory memory;
  std::deque<Intent> plan;
  std::optional<std::string> focus;  // last grounded instance
  std::optional<std::uint64_t> turn;
  std::size_t last_batch = 0;
  std::size_t rounds = 0;
  int scan_steps = 0;
  bool reopened = false;  // already retried a Place after opening
  bool room_visited = false;
  // Pending clarification: the intent and its remaining candidates.
  std::optional<Intent> awaiting;
  std::vector<std::string> candidates;
};

// Deterministic rule-based agent: keyword grammar, greedy grounding,
// visual memory and a small amount of failure recovery.
InferenceResponse baseline_infer(const InferenceRequest& req, const GroundingLexicon& lexicon, BaselineBelief& belief);

// Keeps one belief per session; safe for concurrent sessions.
class BaselineService {
 public:
  explicit BaselineService(GroundingLexicon lexicon) : lexicon_(std::move(lexicon)) {}

  InferenceResponse infer(const InferenceRequest& req);
  void forget(const std::string& session_id);
  const GroundingLexicon& lexicon() const { return lexicon_; }

 private:
  struct Slot {
    std::mutex mu;
    BaselineBelief belief;
  };
  GroundingLexicon lexicon_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

// In-process client around a BaselineService.
class LocalInferenceClient : public InferenceClient {
 public:
  explicit LocalInferenceClient(BaselineService& service) : service_(service) {}
  InferenceResponse infer(const InferenceRequest& request, std::chrono::milliseconds deadline) override;

 private:
  BaselineService& service_;
};

}  // namespace arena
