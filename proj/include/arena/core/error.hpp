#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arena {

enum class ErrorCode {
  SchemaError,
  SchemaVersionUnsupported,
  DanglingReference,
  DuplicateId,
  DecorHasNoAction,
  CoordinateOutOfBounds,
  SceneMismatch,
  SceneNotFound,
  OverrideUnlicensed,
  SelectorUnresolvable,
  CatalogError,
  MalformedPayload,
  MissionNotFound,
  CapacityExceeded,
  SessionNotFound,
  TurnInFlight,
  InferenceTimeout,
  InferenceProtocolError,
  RatingAlreadySubmitted,
  ScoreOutOfRange,
  SessionNotRatable,
  SessionActive,
  HashChainBroken,
  ModelRaised,
  EmptySuite,
  DegenerateSeries,
  SessionClosed,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace arena
