#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "arena/core/error.hpp"
#include "arena/core/world.hpp"

namespace arena::cli {

// Data layout: <data>/classes.json, <data>/scenes/, <data>/missions/.
struct DataPaths {
  std::filesystem::path root;

  std::filesystem::path classes() const { return root / "classes.json"; }
  std::filesystem::path scenes() const { return root / "scenes"; }
  std::filesystem::path missions() const { return root / "missions"; }
};

DataPaths default_data_paths();
RegistryPtr load_registry(const DataPaths& paths);
SceneLibrary load_scenes(const DataPaths& paths);

void register_scene_commands(CLI::App& app, DataPaths& paths);
void register_mission_commands(CLI::App& app, DataPaths& paths);
void register_serve_commands(CLI::App& app, DataPaths& paths);
void register_edh_commands(CLI::App& app, DataPaths& paths);
void register_metrics_commands(CLI::App& app, DataPaths& paths);

}  // namespace arena::cli
