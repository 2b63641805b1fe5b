#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "arena/session/orchestrator.hpp"

namespace arena {

// Deployment settings for `arena serve`.
struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir;      // classes.json, scenes/, missions/
  std::filesystem::path catalog_dir;   // defaults to <data_dir>/missions
  std::filesystem::path store_path;    // SQLite session store; empty keeps sessions in memory
  std::filesystem::path records_path;  // NDJSON interaction records; empty disables
  SessionConfig session;
  // team id -> inference endpoint URL, or "builtin" for the in-process baseline.
  std::map<std::string, std::string> endpoints{{"baseline", "builtin"}};
  std::chrono::seconds sweep_interval{30};
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
std::optional<std::string> process_env(const std::string& name);

// Reads the JSON config document, then applies environment overrides:
//   ARENA_HOST, ARENA_PORT, ARENA_DATA, ARENA_CATALOG, ARENA_STORE,
//   ARENA_RECORDS, ARENA_TEAM, ARENA_INFERENCE_URL (endpoint of the default
//   team), ARENA_MAX_ACTIONS_PER_TURN, ARENA_MAX_FAILURES_PER_TURN,
//   ARENA_INFERENCE_DEADLINE_MS, ARENA_MAX_INFERENCE_ROUNDS,
//   ARENA_ABANDON_AFTER_S.
// Relative paths in the document resolve against `base`.
// Throws SchemaError for malformed values and invalid limits.
ServeConfig parse_serve_config(const nlohmann::json& doc, const EnvLookup& env = process_env,
                               const std::filesystem::path& base = {});
ServeConfig load_serve_config(const std::filesystem::path& path, const EnvLookup& env = process_env);

}  // namespace arena
