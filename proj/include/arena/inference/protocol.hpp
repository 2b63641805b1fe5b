#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "arena/core/action.hpp"
#include "arena/core/observation.hpp"

namespace arena {

inline constexpr std::string_view kInferSchema = "simbot-infer/1";
inline constexpr std::size_t kMaxActionsPerResponse = 10;

enum class Speaker { User, Robot };

struct DialogTurn {
  Speaker speaker = Speaker::User;
  std::string text;
  friend bool operator==(const DialogTurn&, const DialogTurn&) = default;
};

struct ActionRecord {
  Action action;
  bool ok = true;
  friend bool operator==(const ActionRecord&, const ActionRecord&) = default;
};

struct InferenceRequest {
  std::string session_id;
  std::uint64_t turn_index = 0;
  std::string utterance;
  Observation observation;
  std::vector<DialogTurn> dialog_history;
  std::vector<ActionRecord> action_history;
  std::optional<std::string> previous_response_id;
  // N-best recognizer hypotheses; carried but unused by the baseline.
  std::vector<std::string> alternatives;
  // Set when the offline harness drives the model one action at a time.
  bool edh = false;

  friend bool operator==(const InferenceRequest&, const InferenceRequest&) = default;
};

struct InferenceResponse {
  std::string response_id;
  std::vector<Action> actions;
  std::optional<std::string> dialog;
  bool turn_complete = false;

  static InferenceResponse act(std::string id, std::vector<Action> actions);
  static InferenceResponse end(std::string id, std::optional<std::string> dialog = std::nullopt);

  friend bool operator==(const InferenceResponse&, const InferenceResponse&) = default;
};

// A response either continues acting (actions, no dialog, turn open) or
// ends the turn: no actions with optional dialog, or a final action batch
// without dialog. A Stop action may only end a final batch. Throws
// Error{MalformedPayload}.
void validate(const InferenceResponse& r);
void validate(const InferenceRequest& r);

nlohmann::json to_wire(const InferenceRequest& r);
nlohmann::json to_wire(const InferenceResponse& r);
std::string serialize(const InferenceRequest& r);
std::string serialize(const InferenceResponse& r);

using WireMessage = std::variant<InferenceRequest, InferenceResponse>;

// Dispatches on the "kind" field. Unknown fields are ignored. Throws
// Error{MalformedPayload or SchemaVersionUnsupported}.
WireMessage parse_wire(std::string_view bytes);
InferenceRequest parse_request(std::string_view bytes);
InferenceResponse parse_response(std::string_view bytes);

// Anything that answers inference requests. Implementations throw
// Error{InferenceTimeout} when the deadline passes and
// Error{InferenceProtocolError} on unusable replies.
class InferenceClient {
 public:
  virtual ~InferenceClient() = default;
  virtual InferenceResponse infer(const InferenceRequest& request, std::chrono::milliseconds deadline) = 0;
};

}  // namespace arena
