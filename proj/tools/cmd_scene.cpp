#include <fstream>
#include <iostream>

#include "arena/core/error.hpp"
#include "arena/core/observation.hpp"
#include "arena/core/raster_export.hpp"
#include "arena/core/simulator.hpp"
#include "cli_common.hpp"

namespace arena::cli {

namespace {

struct RenderArgs {
  std::string scene = "lab";
  std::string viewpoint;
  std::string heading;
  std::string pitch;
  std::string actions;
  std::string out;
};

void run_render(const DataPaths& paths, const RenderArgs& args) {
  auto lib = load_scenes(paths);
  WorldState s = lib.get(args.scene);
  if (!args.actions.empty()) {
    std::ifstream in(args.actions);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + args.actions);
    nlohmann::json doc = nlohmann::json::parse(in);
    for (const auto& a : doc) {
      auto [next, result] = apply_action(s, a.get<Action>());
      std::cerr << describe(a.get<Action>()) << " -> "
                << (result.ok ? std::string("ok") : std::string(to_string(*result.failure))) << "\n";
      s = std::move(next);
    }
  }
  if (!args.viewpoint.empty()) {
    const auto* vp = s.layout->find_viewpoint(args.viewpoint);
    if (!vp) throw Error(ErrorCode::DanglingReference, "viewpoint " + args.viewpoint);
    s.agent.viewpoint = vp->id;
    s.agent.room = vp->room;
  }
  if (!args.heading.empty()) s.agent.heading = parse_heading(args.heading).value_or(s.agent.heading);
  if (!args.pitch.empty()) s.agent.pitch = parse_pitch(args.pitch).value_or(s.agent.pitch);
  const Observation obs = render_observation(s);
  std::cout << "pose " << nlohmann::json(s.agent).dump() << "\n" << legend_text(obs);
  if (!args.out.empty()) {
    write_pgm(obs, args.out + ".pgm");
    write_legend_png(obs, args.out + ".png");
  }
}

}  // namespace

void register_scene_commands(CLI::App& app, DataPaths& paths) {
  auto args = std::make_shared<RenderArgs>();
  auto* render = app.add_subcommand("render", "Render an egocentric observation of a scene");
  render->add_option("--scene", args->scene, "Scene id");
  render->add_option("--viewpoint", args->viewpoint, "Override the agent viewpoint");
  render->add_option("--heading", args->heading, "N|E|S|W");
  render->add_option("--pitch", args->pitch, "up|level|down");
  render->add_option("--actions", args->actions, "JSON array of actions applied before rendering");
  render->add_option("-o,--out", args->out, "Output prefix for <out>.pgm and <out>.png");
  render->callback([&paths, args] { run_render(paths, *args); });

  auto scene_id = std::make_shared<std::string>("lab");
  auto* hash = app.add_subcommand("hash", "Print the state hash of a freshly loaded scene");
  hash->add_option("scene", *scene_id, "Scene id");
  hash->callback([&paths, scene_id] {
    auto lib = load_scenes(paths);
    std::cout << state_hash(lib.get(*scene_id)) << "\n";
  });
}

}  // namespace arena::cli
