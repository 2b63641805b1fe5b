#include "arena/core/error.hpp"

namespace arena {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::SchemaVersionUnsupported: return "SchemaVersionUnsupported";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DecorHasNoAction: return "DecorHasNoAction";
    case ErrorCode::CoordinateOutOfBounds: return "CoordinateOutOfBounds";
    case ErrorCode::SceneMismatch: return "SceneMismatch";
    case ErrorCode::SceneNotFound: return "SceneNotFound";
    case ErrorCode::OverrideUnlicensed: return "OverrideUnlicensed";
    case ErrorCode::SelectorUnresolvable: return "SelectorUnresolvable";
    case ErrorCode::CatalogError: return "CatalogError";
    case ErrorCode::MalformedPayload: return "MalformedPayload";
    case ErrorCode::MissionNotFound: return "MissionNotFound";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::SessionNotFound: return "SessionNotFound";
    case ErrorCode::TurnInFlight: return "TurnInFlight";
    case ErrorCode::InferenceTimeout: return "InferenceTimeout";
    case ErrorCode::InferenceProtocolError: return "InferenceProtocolError";
    case ErrorCode::RatingAlreadySubmitted: return "RatingAlreadySubmitted";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::SessionNotRatable: return "SessionNotRatable";
    case ErrorCode::SessionActive: return "SessionActive";
    case ErrorCode::HashChainBroken: return "HashChainBroken";
    case ErrorCode::ModelRaised: return "ModelRaised";
    case ErrorCode::EmptySuite: return "EmptySuite";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::SessionClosed: return "SessionClosed";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace arena
