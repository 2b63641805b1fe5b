#include <fstream>
#include <iostream>

#include "arena/edh/harness.hpp"
#include "arena/inference/baseline.hpp"
#include "arena/inference/http.hpp"
#include "arena/session/scripted.hpp"
#include "cli_common.hpp"

namespace arena::cli {

namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

std::optional<MissionCatalog> load_catalog(const DataPaths& paths, const SceneLibrary& scenes) {
  if (!std::filesystem::is_directory(paths.missions())) return std::nullopt;
  return MissionCatalog::load(paths.missions(), scenes);
}

// *.json files of a directory in name order, or the single file given.
std::vector<std::filesystem::path> log_files(const std::filesystem::path& where) {
  if (!std::filesystem::is_directory(where)) return {where};
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(where))
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

struct RunOptions {
  std::string suite;
  std::string builtin;
  std::string endpoint;
  std::string output;
  unsigned threads = 0;
  int deadline_ms = 10000;
};

void run_suite(const DataPaths& paths, const RunOptions& o) {
  const auto scenes = load_scenes(paths);
  const auto instances = suite_from_json(read_json(o.suite));
  const auto deadline = std::chrono::milliseconds(o.deadline_ms);
  SuiteReport report;
  if (!o.endpoint.empty()) {
    HttpInferenceClient client(o.endpoint);
    report = evaluate_suite(instances, inference_model(client, deadline), scenes, o.endpoint, o.threads);
  } else if (o.builtin == "baseline") {
    BaselineService service(GroundingLexicon::build(scenes));
    LocalInferenceClient client(service);
    report = evaluate_suite(instances, inference_model(client, deadline), scenes, "baseline", o.threads);
  } else {
    report = evaluate_suite(instances, builtin_model(o.builtin, scenes), scenes, o.builtin, o.threads);
  }
  if (!o.output.empty()) write_text(o.output, report_to_json(report).dump(2) + "\n");
  std::cout << format_report(report);
}

}  // namespace

void register_edh_commands(CLI::App& app, DataPaths& paths) {
  auto* edh = app.add_subcommand("edh", "Offline Execution-from-Dialog-History harness");
  edh->require_subcommand(1);

  auto* record = edh->add_subcommand("record", "Run a scripted session through the orchestrator and export its log");
  static std::string script, record_out;
  record->add_option("script", script, "Session script (arena-session-script/1)")->required();
  record->add_option("-o,--output", record_out, "Log file to write")->required();
  record->callback([&paths] {
    const auto scenes = load_scenes(paths);
    const auto catalog = MissionCatalog::load(paths.missions(), scenes);
    const SessionLog log = record_scripted_session(read_json(script), catalog, scenes);
    write_text(record_out, canonical_log_text(log));
    std::cout << record_out << ": " << log.events.size() << " event(s), final " << log.recorded_final_hash << "\n";
  });

  auto* replay_cmd = edh->add_subcommand("replay", "Replay session logs and verify their hash chains");
  static std::vector<std::string> replay_logs;
  replay_cmd->add_option("logs", replay_logs, "Log files or directories")->required();
  replay_cmd->callback([&paths] {
    const auto scenes = load_scenes(paths);
    for (const auto& where : replay_logs) {
      for (const auto& f : log_files(where)) {
        const WorldState final_state = replay(load_session_log(f), scenes);
        std::cout << f.string() << ": ok " << state_hash(final_state) << "\n";
      }
    }
  });

  auto* extract = edh->add_subcommand("extract", "Extract EDH instances from session logs");
  static std::string log_dir, suite_out;
  static bool verbose = false;
  extract->add_option("logs", log_dir, "Log directory or file")->required();
  extract->add_option("-o,--output", suite_out, "Suite file to write")->required();
  extract->add_flag("-v,--verbose", verbose, "Print the verdict of every candidate segment");
  extract->callback([&paths] {
    const auto scenes = load_scenes(paths);
    const auto catalog = load_catalog(paths, scenes);
    const MissionCatalog* cat = catalog ? &*catalog : nullptr;
    std::vector<EdhInstance> all;
    for (const auto& f : log_files(log_dir)) {
      const SessionLog log = load_session_log(f);
      if (verbose) {
        for (const auto& c : classify_segments(log, scenes, cat))
          std::cout << f.filename().string() << " events " << c.begin << ".." << c.end << ": " << to_string(c.verdict) << "\n";
      }
      auto instances = extract_edh_instances(log, scenes, cat);
      std::cout << f.filename().string() << ": " << instances.size() << " instance(s)\n";
      for (auto& i : instances) all.push_back(std::move(i));
    }
    write_text(suite_out, suite_to_json(all).dump(2) + "\n");
    std::cout << suite_out << ": " << all.size() << " instance(s)\n";
  });

  auto* run = edh->add_subcommand("run", "Run a model over an EDH suite");
  static RunOptions opts;
  run->add_option("suite", opts.suite, "Suite file")->required();
  auto* builtin = run->add_option("--builtin", opts.builtin, "Built-in model: stop, spin, fail, oracle, partial or baseline");
  auto* endpoint = run->add_option("--endpoint", opts.endpoint, "Inference service URL speaking simbot-infer/1");
  builtin->excludes(endpoint);
  run->add_option("-o,--output", opts.output, "Report file to write");
  run->add_option("--threads", opts.threads, "Worker threads (0 = hardware concurrency)");
  run->add_option("--deadline-ms", opts.deadline_ms, "Per-request inference deadline");
  run->callback([&paths] {
    if (opts.builtin.empty() && opts.endpoint.empty()) throw CLI::ValidationError("--builtin or --endpoint is required");
    run_suite(paths, opts);
  });

  auto* report = edh->add_subcommand("report", "Print an EDH report as a table");
  static std::string report_file;
  report->add_option("results", report_file, "Report file")->required();
  report->callback([] { std::cout << format_report(report_from_json(read_json(report_file))); });
}

}  // namespace arena::cli
