#include "arena/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "arena/core/error.hpp"

namespace arena {

using nlohmann::json;

Metric msr(const std::vector<InteractionRecord>& records) {
  if (records.empty()) return std::nullopt;
  std::size_t ok = 0;
  for (const auto& r : records) ok += r.success ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(records.size());
}

Metric mean_rating(const std::vector<InteractionRecord>& records) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (!r.rating) continue;
    sum += *r.rating;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

namespace {

Metric aggregate(const std::vector<InteractionRecord>& records, MetricKind metric) {
  return metric == MetricKind::Rating ? mean_rating(records) : msr(records);
}

std::vector<InteractionRecord> up_to(const std::vector<InteractionRecord>& records, Timestamp at) {
  std::vector<InteractionRecord> out;
  for (const auto& r : records)
    if (r.timestamp <= at) out.push_back(r);
  return out;
}

}  // namespace

std::vector<InteractionRecord> in_window(const std::vector<InteractionRecord>& records, Timestamp at, int window_days) {
  if (window_days < 1) throw Error(ErrorCode::SchemaError, "window_days must be at least 1");
  const Timestamp from = at - std::chrono::days{window_days};
  std::vector<InteractionRecord> out;
  for (const auto& r : records)
    if (r.timestamp > from && r.timestamp <= at) out.push_back(r);
  return out;
}

Metric rolling_average(const std::vector<InteractionRecord>& records, MetricKind metric, Timestamp at,
                       int window_days) {
  return aggregate(in_window(records, at, window_days), metric);
}

Metric cumulative_average(const std::vector<InteractionRecord>& records, MetricKind metric, Timestamp at) {
  return aggregate(up_to(records, at), metric);
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw Error(ErrorCode::SchemaError,
                "series lengths differ: " + std::to_string(xs.size()) + " vs " + std::to_string(ys.size()));
  if (xs.size() < 2) throw Error(ErrorCode::DegenerateSeries, "need at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw Error(ErrorCode::DegenerateSeries, "a series has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SeenUnseenSplit seen_unseen_split(const std::vector<InteractionRecord>& records) {
  std::vector<InteractionRecord> seen, unseen;
  for (const auto& r : records) (r.mission_seen ? seen : unseen).push_back(r);
  SeenUnseenSplit out{msr(seen), msr(unseen), std::nullopt};
  if (out.seen && out.unseen) out.variance = *out.unseen - *out.seen;
  return out;
}

std::string format_percent(const Metric& fraction) {
  if (!fraction) return "-";
  return std::to_string(std::lround(*fraction * 100.0)) + "%";
}

std::string format_rating(const Metric& rating) {
  if (!rating) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *rating);
  return buf;
}

std::string_view to_string(Window w) { return w == Window::Rolling7d ? "rolling-7d" : "cumulative"; }

namespace {

std::string team_label(std::size_t i) {
  if (i < 26) return std::string("Team ") + static_cast<char>('A' + i);
  return "Team " + std::to_string(i + 1);
}

// Undefined sorts after every defined value.
int compare_desc(const Metric& a, const Metric& b) {
  if (a && b) return *a > *b ? -1 : (*a < *b ? 1 : 0);
  if (a) return -1;
  if (b) return 1;
  return 0;
}

void rank(std::vector<LeaderboardRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
    if (int c = compare_desc(a.avg_rating, b.avg_rating)) return c < 0;
    if (int c = compare_desc(a.msr, b.msr)) return c < 0;
    return a.label < b.label;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
}

json metric_json(const Metric& m) { return m ? json(*m) : json(nullptr); }

}  // namespace

std::vector<std::pair<std::string, std::string>> anonymize(const std::vector<std::string>& roster,
                                                           std::string_view date, std::uint64_t seed) {
  const auto day = std::chrono::floor<std::chrono::days>(end_of_day(date)).time_since_epoch().count();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(day)};
  std::mt19937_64 rng(seq);
  std::vector<std::size_t> slot(roster.size());
  for (std::size_t i = 0; i < slot.size(); ++i) slot[i] = i;
  for (std::size_t i = slot.size(); i > 1; --i) std::swap(slot[i - 1], slot[rng() % i]);
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < roster.size(); ++i) out.emplace_back(roster[i], team_label(slot[i]));
  return out;
}

std::vector<std::string> roster_of(const std::vector<InteractionRecord>& records) {
  std::set<std::string> teams;
  for (const auto& r : records) teams.insert(r.team_id);
  return {teams.begin(), teams.end()};
}

Leaderboard emit_leaderboard(const std::vector<InteractionRecord>& records, const std::vector<std::string>& roster,
                             std::string_view date, std::uint64_t seed) {
  if (roster.empty()) throw Error(ErrorCode::SchemaError, "leaderboard roster is empty");
  if (std::set<std::string>(roster.begin(), roster.end()).size() != roster.size())
    throw Error(ErrorCode::SchemaError, "leaderboard roster lists a team twice");
  const std::set<std::string> known(roster.begin(), roster.end());
  for (const auto& r : records)
    if (!known.count(r.team_id)) throw Error(ErrorCode::SchemaError, "record for team " + r.team_id + " not on the roster");

  const Timestamp at = end_of_day(date);
  Leaderboard board{std::string(date), seed, {}};
  std::vector<LeaderboardRow> rolling, cumulative;
  for (const auto& [team, label] : anonymize(roster, date, seed)) {
    std::vector<InteractionRecord> mine;
    for (const auto& r : records)
      if (r.team_id == team) mine.push_back(r);
    for (auto [window, subset] : {std::pair{Window::Rolling7d, in_window(mine, at, 7)},
                                  std::pair{Window::Cumulative, up_to(mine, at)}}) {
      LeaderboardRow row{label, window, 0, mean_rating(subset), msr(subset), subset.size(), 0};
      for (const auto& r : subset) row.n_rated += r.rating ? 1 : 0;
      (window == Window::Rolling7d ? rolling : cumulative).push_back(std::move(row));
    }
  }
  rank(rolling);
  rank(cumulative);
  board.rows = std::move(rolling);
  board.rows.insert(board.rows.end(), cumulative.begin(), cumulative.end());
  return board;
}

json leaderboard_to_json(const Leaderboard& board) {
  json rows = json::array();
  for (const auto& r : board.rows)
    rows.push_back({{"label", r.label},
                    {"window", to_string(r.window)},
                    {"rank", r.rank},
                    {"avg_rating", metric_json(r.avg_rating)},
                    {"msr", metric_json(r.msr)},
                    {"n_sessions", r.n_sessions},
                    {"n_rated", r.n_rated}});
  return json{{"schema", kLeaderboardSchema},
              {"date", board.date},
              {"seed", board.seed},
              {"abandoned_sessions_count_as_failures", true},
              {"rows", rows}};
}

std::string format_leaderboard(const Leaderboard& board) {
  std::ostringstream out;
  out << "Leaderboard " << board.date << "\n";
  for (const Window w : {Window::Rolling7d, Window::Cumulative}) {
    out << "\n" << to_string(w) << "\n";
    char line[128];
    std::snprintf(line, sizeof line, "%-5s %-10s %8s %6s %9s\n", "rank", "team", "rating", "msr", "sessions");
    out << line;
    for (const auto& r : board.rows) {
      if (r.window != w) continue;
      std::snprintf(line, sizeof line, "%-5zu %-10s %8s %6s %9zu\n", r.rank, r.label.c_str(),
                    format_rating(r.avg_rating).c_str(), format_percent(r.msr).c_str(), r.n_sessions);
      out << line;
    }
  }
  out << "\nAbandoned sessions count as failed missions.\n";
  return out.str();
}

}  // namespace arena
