#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/metrics/records.hpp"

namespace arena {

inline constexpr std::string_view kLeaderboardSchema = "arena-leaderboard/1";

// Aggregates are std::nullopt when no record contributes: the undefined
// marker, rendered as "-".
using Metric = std::optional<double>;

// Succeeded missions over total missions. Abandoned sessions are recorded as
// unsuccessful and count in the denominator.
Metric msr(const std::vector<InteractionRecord>& records);

// Mean of the ratings present; unrated records are skipped.
Metric mean_rating(const std::vector<InteractionRecord>& records);

enum class MetricKind { Rating, Msr };

// Records with at - window_days < timestamp <= at. Throws SchemaError when
// window_days < 1.
std::vector<InteractionRecord> in_window(const std::vector<InteractionRecord>& records, Timestamp at, int window_days);

Metric rolling_average(const std::vector<InteractionRecord>& records, MetricKind metric, Timestamp at,
                       int window_days = 7);

// Every record with timestamp <= at.
Metric cumulative_average(const std::vector<InteractionRecord>& records, MetricKind metric, Timestamp at);

// Product-moment correlation. Throws DegenerateSeries for fewer than two
// points or a constant series, SchemaError for unequal lengths.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct SeenUnseenSplit {
  Metric seen;
  Metric unseen;
  // unseen - seen as a fraction; 0.02 is two percentage points.
  Metric variance;
};

SeenUnseenSplit seen_unseen_split(const std::vector<InteractionRecord>& records);

// 0.45 -> "45%", -0.1 -> "-10%", undefined -> "-".
std::string format_percent(const Metric& fraction);
// 3.8666 -> "3.87", undefined -> "-".
std::string format_rating(const Metric& rating);

// ---------------------------------------------------------- leaderboard

enum class Window { Rolling7d, Cumulative };
std::string_view to_string(Window w);

struct LeaderboardRow {
  std::string label;
  Window window = Window::Cumulative;
  std::size_t rank = 0;  // 1-based within the window
  Metric avg_rating;
  Metric msr;
  std::size_t n_sessions = 0;
  std::size_t n_rated = 0;
  friend bool operator==(const LeaderboardRow&, const LeaderboardRow&) = default;
};

struct Leaderboard {
  std::string date;  // YYYY-MM-DD, windows end at 23:59:59 UTC that day
  std::uint64_t seed = 0;
  // Rolling rows in rank order, then cumulative rows in rank order. Ranks
  // order by average rating, then MSR, then label; undefined sorts last.
  std::vector<LeaderboardRow> rows;
  friend bool operator==(const Leaderboard&, const Leaderboard&) = default;
};

// Labels "Team A", "Team B", ... in roster order after a permutation seeded
// by (seed, date). Throws SchemaError for an empty roster, a duplicate team
// or a record whose team is not on the roster.
Leaderboard emit_leaderboard(const std::vector<InteractionRecord>& records, const std::vector<std::string>& roster,
                             std::string_view date, std::uint64_t seed = 0);

// team_id -> label for one emission.
std::vector<std::pair<std::string, std::string>> anonymize(const std::vector<std::string>& roster,
                                                           std::string_view date, std::uint64_t seed);

// Distinct team ids of the records, sorted.
std::vector<std::string> roster_of(const std::vector<InteractionRecord>& records);

nlohmann::json leaderboard_to_json(const Leaderboard& board);
std::string format_leaderboard(const Leaderboard& board);

}  // namespace arena
