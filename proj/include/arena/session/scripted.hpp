#pragma once

#include <json.hpp>

#include "arena/edh/session_log.hpp"
#include "arena/session/orchestrator.hpp"

namespace arena {

inline constexpr std::string_view kSessionScriptSchema = "arena-session-script/1";

// Runs a scripted session through a SessionManager and exports its log.
// Script document:
//   {"schema": "arena-session-script/1", "mission_id": "...",
//    "turns": [{"utterance": "...",
//               "responses": [{"actions": [...], "dialog": "..." | null,
//                              "turn_complete": true | false}]}]}
// Every turn replies with its responses in order; a session still active
// after the last turn is ended before export. Throws SchemaError for
// malformed scripts and MalformedPayload for invalid responses.
SessionLog record_scripted_session(const nlohmann::json& script, const MissionCatalog& catalog,
                                   const SceneLibrary& scenes);

}  // namespace arena
