#pragma once

#include <string>
#include <vector>

#include "arena/core/simulator.hpp"
#include "arena/inference/baseline.hpp"
#include "support/fixtures.hpp"

namespace arena::testing {

inline const GroundingLexicon& fixture_lexicon() {
  static GroundingLexicon lex = GroundingLexicon::build(fixture_scenes());
  return lex;
}

struct DriverTurn {
  std::vector<InferenceResponse> responses;
  std::vector<Action> executed;
  std::vector<bool> ok;

  std::vector<ActionType> types() const {
    std::vector<ActionType> out;
    for (const auto& a : executed) out.push_back(a.type);
    return out;
  }
};

// Minimal stand-in for the orchestrator loop: feeds the baseline requests,
// executes its actions and records everything it emitted.
class BaselineDriver {
 public:
  explicit BaselineDriver(WorldState world, std::string session_id = "drv") : world_(std::move(world)), id_(std::move(session_id)) {}

  DriverTurn say(const std::string& text, std::size_t max_rounds = 10) {
    DriverTurn turn;
    dialog_.push_back({Speaker::User, text});
    for (std::size_t round = 0; round < max_rounds; ++round) {
      InferenceRequest req;
      req.session_id = id_;
      req.turn_index = turn_;
      req.utterance = text;
      req.observation = render_observation(world_);
      req.dialog_history = dialog_;
      req.action_history = actions_;
      req.previous_response_id = previous_;
      req.edh = edh;
      shadow_.update(req.observation);
      requests.push_back(req);

      InferenceResponse resp = baseline_infer(req, fixture_lexicon(), belief);
      validate(resp);
      previous_ = resp.response_id;
      turn.responses.push_back(resp);
      for (const auto& a : resp.actions) {
        if (a.target && a.target->is_instance() && !shadow_.find(a.target->instance_id()))
          ungrounded.push_back(a.target->instance_id());
        auto [next, result] = apply_action(world_, a);
        world_ = std::move(next);
        actions_.push_back({a, result.ok});
        turn.executed.push_back(a);
        turn.ok.push_back(result.ok);
      }
      if (resp.dialog) dialog_.push_back({Speaker::Robot, *resp.dialog});
      if (resp.turn_complete) break;
    }
    ++turn_;
    return turn;
  }

  const WorldState& world() const { return world_; }
  void set_world(WorldState w) { world_ = std::move(w); }

  BaselineBelief belief;
  bool edh = false;
  std::vector<InferenceRequest> requests;
  // Targets that were neither visible nor remembered when emitted.
  std::vector<std::string> ungrounded;

 private:
  WorldState world_;
  std::string id_;
  std::uint64_t turn_ = 0;
  std::vector<DialogTurn> dialog_;
  std::vector<ActionRecord> actions_;
  std::optional<std::string> previous_;
  VisualMemory shadow_;
};

}  // namespace arena::testing
