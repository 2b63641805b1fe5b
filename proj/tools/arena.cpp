#include <cstdlib>
#include <iostream>

#include "arena/core/error.hpp"
#include "cli_common.hpp"

namespace arena::cli {

DataPaths default_data_paths() {
  if (const char* env = std::getenv("ARENA_DATA")) return {env};
  return {ARENA_DEFAULT_DATA_DIR};
}

RegistryPtr load_registry(const DataPaths& paths) {
  return std::make_shared<const ClassRegistry>(ClassRegistry::load(paths.classes()));
}

SceneLibrary load_scenes(const DataPaths& paths) {
  SceneLibrary lib(load_registry(paths));
  lib.load_directory(paths.scenes());
  return lib;
}

}  // namespace arena::cli

int main(int argc, char** argv) {
  using namespace arena::cli;
  CLI::App app{"Embodied-task arena: simulator, session service, EDH harness and metrics"};
  app.require_subcommand(1);
  DataPaths paths = default_data_paths();
  std::string data_root;
  app.add_option("--data", data_root, "Data directory with classes.json, scenes/ and missions/");
  app.parse_complete_callback([&] {
    if (!data_root.empty()) paths.root = data_root;
  });

  register_scene_commands(app, paths);
  register_mission_commands(app, paths);
  register_serve_commands(app, paths);
  register_edh_commands(app, paths);
  register_metrics_commands(app, paths);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const arena::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
