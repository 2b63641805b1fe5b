#include <cstdio>
#include <fstream>
#include <iostream>

#include "arena/metrics/metrics.hpp"
#include "cli_common.hpp"

namespace arena::cli {

namespace {

std::vector<std::string> read_roster(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::vector<InteractionRecord> records_of(const std::vector<InteractionRecord>& all, const std::string& team) {
  std::vector<InteractionRecord> out;
  for (const auto& r : all)
    if (r.team_id == team) out.push_back(r);
  return out;
}

void print_msr(const std::vector<InteractionRecord>& records) {
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %9s %6s %6s %8s %9s\n", "team", "sessions", "msr", "seen", "unseen",
                "variance");
  std::cout << line;
  auto row = [&](const std::string& name, const std::vector<InteractionRecord>& rs) {
    const auto split = seen_unseen_split(rs);
    std::snprintf(line, sizeof line, "%-16s %9zu %6s %6s %8s %9s\n", name.c_str(), rs.size(),
                  format_percent(msr(rs)).c_str(), format_percent(split.seen).c_str(),
                  format_percent(split.unseen).c_str(), format_percent(split.variance).c_str());
    std::cout << line;
  };
  for (const auto& team : roster_of(records)) row(team, records_of(records, team));
  row("all", records);
  std::cout << "Abandoned sessions count as failed missions.\n";
}

void print_correlation(const std::vector<InteractionRecord>& records) {
  std::vector<double> ratings, rates;
  for (const auto& team : roster_of(records)) {
    const auto mine = records_of(records, team);
    const auto rating = mean_rating(mine);
    const auto rate = msr(mine);
    if (!rating || !rate) continue;
    ratings.push_back(*rating);
    rates.push_back(*rate);
  }
  char line[96];
  std::snprintf(line, sizeof line, "pearson(rating, msr) = %.4f over %zu team(s)\n", pearson(ratings, rates),
                ratings.size());
  std::cout << line;
}

}  // namespace

void register_metrics_commands(CLI::App& app, DataPaths&) {
  auto* metrics = app.add_subcommand("metrics", "Aggregate interaction records");
  metrics->require_subcommand(1);
  static std::string from;

  auto* msr_cmd = metrics->add_subcommand("msr", "Mission success rate per team with the seen/unseen split");
  msr_cmd->add_option("--from", from, "Record store (newline-delimited JSON)")->required();
  msr_cmd->callback([] { print_msr(RecordStore::read(from)); });

  auto* corr = metrics->add_subcommand("correlation", "Pearson correlation of team mean rating and MSR");
  corr->add_option("--from", from, "Record store (newline-delimited JSON)")->required();
  corr->callback([] { print_correlation(RecordStore::read(from)); });

  auto* board = app.add_subcommand("leaderboard", "Emit the anonymized daily leaderboard");
  static std::string at, board_from, roster_file, output;
  static std::uint64_t seed = 0;
  board->add_option("--at", at, "Emission date YYYY-MM-DD (UTC)")->required();
  board->add_option("--from", board_from, "Record store (newline-delimited JSON)")->required();
  board->add_option("--roster", roster_file, "Team ids, one per line (default: teams in the records)");
  board->add_option("--seed", seed, "Anonymization seed");
  board->add_option("-o,--output", output, "JSON report to write");
  board->callback([] {
    const auto records = RecordStore::read(board_from);
    const auto roster = roster_file.empty() ? roster_of(records) : read_roster(roster_file);
    const Leaderboard lb = emit_leaderboard(records, roster, at, seed);
    if (!output.empty()) {
      std::ofstream out(output, std::ios::binary);
      if (!out) throw Error(ErrorCode::IoError, "cannot write " + output);
      out << leaderboard_to_json(lb).dump(2) << "\n";
    }
    std::cout << format_leaderboard(lb);
  });
}

}  // namespace arena::cli
