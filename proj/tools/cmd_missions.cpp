#include <fstream>
#include <iostream>
#include <sstream>

#include "arena/missions/mission.hpp"
#include "cli_common.hpp"

namespace arena::cli {

namespace {

void run_validate(const DataPaths& paths, const std::string& dir) {
  const auto scenes = load_scenes(paths);
  const auto catalog = MissionCatalog::load(dir.empty() ? paths.missions() : std::filesystem::path(dir), scenes);
  int seen = 0;
  for (const auto& m : catalog.missions()) {
    seen += m.seen;
    std::cout << m.mission_id << "\t" << (m.seen ? "seen" : "unseen") << "\t" << m.subgoals.size()
              << " subgoal(s)\tsolved at tick " << m.solution_completes_at << "\n";
  }
  std::cout << catalog.size() << " mission(s): " << seen << " seen, " << catalog.size() - seen << " unseen\n";
}

// Rewrites mission files in canonical form; with --check, only reports
// files that differ.
int run_fmt(const std::vector<std::string>& files, bool check) {
  int differing = 0;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + f);
    std::stringstream raw;
    raw << in.rdbuf();
    const auto canonical = canonical_mission_text(mission_from_json(nlohmann::json::parse(raw.str())));
    if (canonical == raw.str()) continue;
    ++differing;
    if (check) {
      std::cout << f << ": not canonical\n";
    } else {
      std::ofstream(f, std::ios::binary) << canonical;
    }
  }
  return differing;
}

}  // namespace

void register_mission_commands(CLI::App& app, DataPaths& paths) {
  auto* missions = app.add_subcommand("missions", "Mission catalog tools");
  missions->require_subcommand(1);

  auto* validate = missions->add_subcommand("validate", "Load and check every mission, replaying its scripted solution");
  static std::string dir;
  validate->add_option("dir", dir, "Mission directory (defaults to <data>/missions)");
  validate->callback([&paths] { run_validate(paths, dir); });

  auto* init = missions->add_subcommand("init", "Print the initial state hash of a catalog mission");
  static std::string mission_id;
  init->add_option("mission", mission_id, "Mission id")->required();
  init->callback([&paths] {
    const auto scenes = load_scenes(paths);
    const auto catalog = MissionCatalog::load(paths.missions(), scenes);
    std::cout << state_hash(init_mission(catalog.get(mission_id), scenes)) << "\n";
  });

  auto* fmt = missions->add_subcommand("fmt", "Rewrite mission files in canonical form");
  static std::vector<std::string> files;
  static bool check = false;
  fmt->add_option("files", files, "Mission files")->required();
  fmt->add_flag("--check", check, "Report non-canonical files and exit 1 instead of rewriting");
  fmt->callback([] {
    if (run_fmt(files, check) > 0 && check) throw CLI::RuntimeError(1);
  });
}

}  // namespace arena::cli
