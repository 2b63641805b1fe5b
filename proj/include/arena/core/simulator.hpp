#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arena/core/action.hpp"
#include "arena/core/delta.hpp"
#include "arena/core/world.hpp"

namespace arena {

enum class FailureCode {
  ActionNotApplicable,
  TargetNotVisible,
  TargetNotResolvable,
  HandOccupied,
  HandEmpty,
  ReceptacleClosed,
  NavigationBlocked,
  DecorTarget,
};

std::string_view to_string(FailureCode c);
std::optional<FailureCode> parse_failure_code(std::string_view s);

struct ActionResult {
  bool ok = true;
  std::optional<FailureCode> failure;
  StateDelta delta;
  // Poses to stream, one per frame, in order. The world content of every
  // frame is the post-action state; only the viewpoint differs.
  std::vector<AgentPose> frames;
  // Set for Highlight.
  std::optional<std::string> highlighted;

  static ActionResult failed(FailureCode code, AgentPose pose) {
    ActionResult r;
    r.ok = false;
    r.failure = code;
    r.frames.push_back(std::move(pose));
    return r;
  }
};

void to_json(nlohmann::json& j, const ActionResult& r);
void from_json(const nlohmann::json& j, ActionResult& r);
std::string result_digest(const ActionResult& r);

// Applies one action; never mutates `state`. The returned state has tick
// advanced by exactly one, failed or not.
std::pair<WorldState, ActionResult> apply_action(const WorldState& state, const Action& action);

}  // namespace arena
