#pragma once

#include <fstream>

#include <json.hpp>

#include "arena/edh/harness.hpp"
#include "support/fixtures.hpp"
#include "support/missions.hpp"

namespace arena::testing {

inline std::filesystem::path edh_dir() { return data_dir() / "edh"; }

inline nlohmann::json read_json_file(const std::filesystem::path& p) { return nlohmann::json::parse(read_file(p)); }

inline SessionLog edh_log(const std::string& name) { return load_session_log(edh_dir() / "logs" / (name + ".log.json")); }

inline nlohmann::json edh_script(const std::string& name) { return read_json_file(edh_dir() / "scripts" / (name + ".json")); }

inline std::vector<EdhInstance> golden_suite() { return suite_from_json(read_json_file(golden_dir() / "edh" / "suite.json")); }

}  // namespace arena::testing
