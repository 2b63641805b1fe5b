#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "arena/metrics/metrics.hpp"
#include "support/fixtures.hpp"
#include "support/metrics_fixtures.hpp"
#include "support/temp_dir.hpp"

namespace arena {
namespace {

using nlohmann::json;

InteractionRecord record(std::string team, std::string when, bool success, std::optional<int> rating = std::nullopt,
                         bool seen = true) {
  return {std::move(team), parse_timestamp(when), "fetch_soda", seen, success, rating};
}

// `ok` successes out of `n`, all tagged `seen`.
std::vector<InteractionRecord> outcomes(std::size_t ok, std::size_t n, bool seen) {
  std::vector<InteractionRecord> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(record("t", "2022-06-01T10:00:00Z", i < ok, std::nullopt, seen));
  return out;
}

std::vector<InteractionRecord> league() {
  return RecordStore::read(std::filesystem::path(ARENA_FIXTURES_DIR) / "metrics" / "league.ndjson");
}

std::vector<std::string> league_roster() {
  std::ifstream in(std::filesystem::path(ARENA_FIXTURES_DIR) / "metrics" / "roster.txt");
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

// ------------------------------------------------------------------ msr

TEST(Msr, SevenOfTenIsSevenTenths) { EXPECT_DOUBLE_EQ(*msr(outcomes(7, 10, true)), 0.7); }

TEST(Msr, NoRecordsIsUndefined) {
  EXPECT_FALSE(msr({}).has_value());
  EXPECT_EQ(format_percent(msr({})), "-");
}

TEST(Msr, MatchesHandCountOnRandomRecordSets) {
  std::mt19937_64 rng(4242);
  for (int set = 0; set < 20; ++set) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<InteractionRecord> rs;
    std::size_t ok = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool success = rng() % 3 == 0;
      ok += success;
      rs.push_back(record("t" + std::to_string(rng() % 4), "2022-06-01T10:00:00Z", success,
                          rng() % 2 ? std::optional<int>(1 + rng() % 5) : std::nullopt, rng() % 2));
    }
    const auto m = msr(rs);
    ASSERT_TRUE(m);
    EXPECT_EQ(*m, static_cast<double>(ok) / static_cast<double>(n)) << "set " << set;
    EXPECT_GE(*m, 0.0);
    EXPECT_LE(*m, 1.0);
  }
}

TEST(Msr, AddingASuccessNeverLowersItAndAddingAFailureNeverRaisesIt) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto rs = outcomes(rng() % 20, 20 + rng() % 20, true);
    const double before = *msr(rs);
    auto up = rs;
    up.push_back(record("t", "2022-06-01T10:00:00Z", true));
    auto down = rs;
    down.push_back(record("t", "2022-06-01T10:00:00Z", false));
    EXPECT_GE(*msr(up), before);
    EXPECT_LE(*msr(down), before);
  }
}

TEST(Msr, UnratedRecordsCountForMsrButNotForRatings) {
  const std::vector<InteractionRecord> rs{record("t", "2022-06-01T10:00:00Z", true, 5),
                                          record("t", "2022-06-01T11:00:00Z", false),
                                          record("t", "2022-06-01T12:00:00Z", false, 2)};
  EXPECT_DOUBLE_EQ(*msr(rs), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(*mean_rating(rs), 3.5);
  EXPECT_FALSE(mean_rating({rs[1]}).has_value());
}

// ---------------------------------------------------------- formatting

TEST(Formatting, PercentagesHaveNoDecimals) {
  EXPECT_EQ(format_percent(0.45), "45%");
  EXPECT_EQ(format_percent(0.455), "46%");
  EXPECT_EQ(format_percent(1.0), "100%");
  EXPECT_EQ(format_percent(0.0), "0%");
  EXPECT_EQ(format_percent(-0.1), "-10%");
  EXPECT_EQ(format_rating(3.8666), "3.87");
  EXPECT_EQ(format_rating(std::nullopt), "-");
}

struct SplitRow {
  const char* name;
  std::size_t seen_ok, unseen_ok;
  const char* seen, *unseen, *variance;
};

void PrintTo(const SplitRow& row, std::ostream* os) { *os << row.name; }

class SeenUnseenRows : public ::testing::TestWithParam<SplitRow> {};

TEST_P(SeenUnseenRows, RenderAsWholePercentages) {
  const SplitRow& row = GetParam();
  auto rs = outcomes(row.seen_ok, 100, true);
  for (const auto& r : outcomes(row.unseen_ok, 100, false)) rs.push_back(r);
  const auto split = seen_unseen_split(rs);
  EXPECT_EQ(format_percent(split.seen), row.seen);
  EXPECT_EQ(format_percent(split.unseen), row.unseen);
  EXPECT_EQ(format_percent(split.variance), row.variance);
  EXPECT_NEAR(*split.variance * 100.0, std::stod(row.variance), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Splits, SeenUnseenRows,
                         ::testing::Values(SplitRow{"AllTeams", 45, 47, "45%", "47%", "2%"},
                                           SplitRow{"Finalists", 53, 55, "53%", "55%", "2%"},
                                           SplitRow{"Baseline", 45, 55, "45%", "55%", "10%"}),
                         [](const auto& info) { return std::string(info.param.name); });

TEST(SeenUnseen, AllSeenLeavesUnseenAndVarianceUndefined) {
  const auto split = seen_unseen_split(outcomes(3, 5, true));
  EXPECT_DOUBLE_EQ(*split.seen, 0.6);
  EXPECT_FALSE(split.unseen.has_value());
  EXPECT_FALSE(split.variance.has_value());
}

TEST(SeenUnseen, IdenticalPatternsHaveZeroVariance) {
  auto rs = outcomes(7, 20, true);
  for (const auto& r : outcomes(7, 20, false)) rs.push_back(r);
  EXPECT_EQ(*seen_unseen_split(rs).variance, 0.0);
}

// ------------------------------------------------------------- pearson

using testing::direct_pearson;
const auto& kRatings = testing::kFixtureRatings;
const auto& kRates = testing::kFixtureRates;

TEST(Pearson, TenPointFixtureMatchesTheFrozenValue) {
  EXPECT_NEAR(pearson(kRatings, kRates), testing::kFixturePearson, 1e-12);
  EXPECT_NEAR(pearson(kRatings, kRates), direct_pearson(kRatings, kRates), 1e-12);
}

TEST(Pearson, AffineAndNegatedSeries) {
  std::vector<double> affine, negated;
  for (double x : kRatings) {
    affine.push_back(2 * x + 1);
    negated.push_back(-x);
  }
  EXPECT_NEAR(pearson(kRatings, affine), 1.0, 1e-12);
  EXPECT_NEAR(pearson(kRatings, negated), -1.0, 1e-12);
}

TEST(Pearson, MatchesTheDirectFormulaOnRandomSeries) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = 0.5 * x[i] + u(rng);
    }
    const double r = pearson(x, y);
    EXPECT_NEAR(r, direct_pearson(x, y), 1e-12);
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);

    const double a = 0.1 + std::abs(u(rng)), b = u(rng);
    std::vector<double> tx, neg;
    for (double v : x) {
      tx.push_back(a * v + b);
      neg.push_back(-v);
    }
    EXPECT_NEAR(pearson(tx, y), r, 1e-12);
    EXPECT_NEAR(pearson(x, tx), 1.0, 1e-12);
    EXPECT_NEAR(pearson(neg, y), -r, 1e-12);
  }
}

TEST(Pearson, DegenerateInputs) {
  EXPECT_ARENA_ERROR(pearson({1.0}, {2.0}), ErrorCode::DegenerateSeries);
  EXPECT_ARENA_ERROR(pearson({}, {}), ErrorCode::DegenerateSeries);
  EXPECT_ARENA_ERROR(pearson({1, 1, 1}, {1, 2, 3}), ErrorCode::DegenerateSeries);
  EXPECT_ARENA_ERROR(pearson({1, 2, 3}, {4, 4, 4}), ErrorCode::DegenerateSeries);
  EXPECT_ARENA_ERROR(pearson({1, 2, 3}, {1, 2}), ErrorCode::SchemaError);
}

// ------------------------------------------------------ rolling windows

using testing::brute_rolling_rating;
using testing::end_of_ramp_day;
using testing::kRampDays;
using testing::ramp;

TEST(Rolling, RampMatchesBruteForceEveryDay) {
  const auto records = ramp();
  for (int day = 0; day < kRampDays + 10; ++day) {
    const auto got = rolling_average(records, MetricKind::Rating, end_of_ramp_day(day));
    const auto want = brute_rolling_rating(day);
    ASSERT_EQ(got.has_value(), want.has_value()) << "day " << day;
    if (want) {
      EXPECT_NEAR(*got, *want, 1e-12) << "day " << day;
    }
  }
}

TEST(Rolling, RampRisesFromThreeToThreePointNine) {
  const auto records = ramp();
  EXPECT_NEAR(*rolling_average(records, MetricKind::Rating, end_of_ramp_day(0)), 3.0, 1e-12);
  EXPECT_NEAR(*rolling_average(records, MetricKind::Rating, end_of_ramp_day(kRampDays - 1)), 3.9, 0.05);
  EXPECT_NEAR(*rolling_average(records, MetricKind::Msr, end_of_ramp_day(kRampDays - 1)), 0.5, 1e-12);
}

TEST(Rolling, EmptyWindowIsAbsent) {
  const auto records = ramp();
  EXPECT_FALSE(rolling_average(records, MetricKind::Rating, end_of_ramp_day(62)).has_value());
  EXPECT_FALSE(rolling_average(records, MetricKind::Msr, end_of_ramp_day(62)).has_value());
  EXPECT_TRUE(rolling_average(records, MetricKind::Rating, end_of_ramp_day(63)).has_value());
  EXPECT_FALSE(rolling_average(records, MetricKind::Rating, testing::ramp_start() - std::chrono::seconds{1}).has_value());
}

TEST(Rolling, WindowIsOpenAtTheStartAndClosedAtTheEnd) {
  const auto at = parse_timestamp("2022-06-08T12:00:00Z");
  const std::vector<InteractionRecord> rs{record("t", "2022-06-01T12:00:00Z", true, 1),
                                          record("t", "2022-06-01T12:00:01Z", false, 4),
                                          record("t", "2022-06-08T12:00:00Z", false, 2),
                                          record("t", "2022-06-08T12:00:01Z", true, 5)};
  EXPECT_DOUBLE_EQ(*rolling_average(rs, MetricKind::Rating, at), 3.0);
  EXPECT_DOUBLE_EQ(*rolling_average(rs, MetricKind::Msr, at), 0.0);
  EXPECT_DOUBLE_EQ(*rolling_average(rs, MetricKind::Rating, at, 1), 2.0);
  EXPECT_ARENA_ERROR(rolling_average(rs, MetricKind::Rating, at, 0), ErrorCode::SchemaError);
}

TEST(Rolling, AllRecordsInsideTheWindowGiveThePlainMean) {
  const auto rs = league();
  const Timestamp at = rs.back().timestamp;
  EXPECT_EQ(rolling_average(rs, MetricKind::Rating, at, 365), mean_rating(rs));
  EXPECT_EQ(rolling_average(rs, MetricKind::Msr, at, 365), msr(rs));
  EXPECT_EQ(cumulative_average(rs, MetricKind::Msr, at), msr(rs));
}

TEST(Rolling, ConstantSeriesAveragesToTheConstant) {
  std::mt19937_64 rng(5);
  std::vector<InteractionRecord> rs;
  for (int i = 0; i < 300; ++i)
    rs.push_back({"t", testing::ramp_start() + std::chrono::seconds{static_cast<long>(rng() % (86400L * 60))}, "m", true, true, 4});
  for (int day = 0; day < 70; ++day) {
    const auto r = rolling_average(rs, MetricKind::Rating, end_of_ramp_day(day));
    if (r) {
      EXPECT_DOUBLE_EQ(*r, 4.0);
    }
    const auto m = rolling_average(rs, MetricKind::Msr, end_of_ramp_day(day));
    if (m) {
      EXPECT_DOUBLE_EQ(*m, 1.0);
    }
  }
}

TEST(Cumulative, ExcludesLaterRecords) {
  const std::vector<InteractionRecord> rs{record("t", "2022-06-01T00:00:00Z", true, 5),
                                          record("t", "2022-06-02T00:00:00Z", false, 1)};
  EXPECT_DOUBLE_EQ(*cumulative_average(rs, MetricKind::Rating, end_of_day("2022-06-01")), 5.0);
  EXPECT_DOUBLE_EQ(*cumulative_average(rs, MetricKind::Msr, end_of_day("2022-06-02")), 0.5);
  EXPECT_FALSE(cumulative_average(rs, MetricKind::Msr, end_of_day("2022-05-31")).has_value());
}

// ---------------------------------------------------------- leaderboard

TEST(Leaderboard, SingleTeamGetsAnAnonymousLabel) {
  const std::vector<InteractionRecord> rs{record("alpha", "2022-06-01T09:00:00Z", true, 4)};
  const auto board = emit_leaderboard(rs, {"alpha"}, "2022-06-01");
  ASSERT_EQ(board.rows.size(), 2u);
  EXPECT_EQ(board.rows[0].label, "Team A");
  EXPECT_NE(board.rows[0].label, "alpha");
  EXPECT_EQ(board.rows[0].window, Window::Rolling7d);
  EXPECT_EQ(board.rows[1].window, Window::Cumulative);
  EXPECT_DOUBLE_EQ(*board.rows[0].msr, 1.0);
  EXPECT_DOUBLE_EQ(*board.rows[0].avg_rating, 4.0);
}

TEST(Leaderboard, SameDateSameSeedSameOutput) {
  const auto rs = league();
  const auto a = emit_leaderboard(rs, league_roster(), "2022-06-15", 7);
  const auto b = emit_leaderboard(rs, league_roster(), "2022-06-15", 7);
  EXPECT_EQ(a, b);
  EXPECT_EQ(format_leaderboard(a), format_leaderboard(b));
}

TEST(Leaderboard, TenTeamRosterMatchesTheGoldenReport) {
  const auto board = emit_leaderboard(league(), league_roster(), "2022-06-15", 7);
  std::ifstream in(std::filesystem::path(ARENA_GOLDEN_DIR) / "metrics" / "leaderboard.json");
  ASSERT_TRUE(in);
  EXPECT_EQ(leaderboard_to_json(board), json::parse(in));
}

TEST(Leaderboard, RowsAggregateEachTeamsRecords) {
  const auto rs = league();
  const auto roster = league_roster();
  const auto board = emit_leaderboard(rs, roster, "2022-06-15", 7);
  const Timestamp at = end_of_day("2022-06-15");
  for (const auto& [team, label] : anonymize(roster, "2022-06-15", 7)) {
    std::vector<InteractionRecord> mine;
    for (const auto& r : rs)
      if (r.team_id == team) mine.push_back(r);
    for (const auto& row : board.rows) {
      if (row.label != label) continue;
      const auto kind = row.window == Window::Rolling7d;
      const auto want_rating = kind ? rolling_average(mine, MetricKind::Rating, at)
                                    : cumulative_average(mine, MetricKind::Rating, at);
      const auto want_msr =
          kind ? rolling_average(mine, MetricKind::Msr, at) : cumulative_average(mine, MetricKind::Msr, at);
      EXPECT_EQ(row.avg_rating, want_rating) << team;
      EXPECT_EQ(row.msr, want_msr) << team;
    }
  }
}

TEST(Leaderboard, RanksFollowRatingThenMsr) {
  const auto board = emit_leaderboard(league(), league_roster(), "2022-06-15", 7);
  for (std::size_t i = 1; i < board.rows.size(); ++i) {
    const auto& a = board.rows[i - 1];
    const auto& b = board.rows[i];
    if (a.window != b.window) continue;
    EXPECT_EQ(b.rank, a.rank + 1);
    ASSERT_TRUE(a.avg_rating && b.avg_rating);
    EXPECT_GE(*a.avg_rating, *b.avg_rating);
  }
}

TEST(Leaderboard, TeamsWithoutRecordsRankLast) {
  const std::vector<InteractionRecord> rs{record("alpha", "2022-06-01T09:00:00Z", false, 1)};
  const auto board = emit_leaderboard(rs, {"alpha", "beta"}, "2022-06-01");
  EXPECT_EQ(board.rows[1].n_sessions, 0u);
  EXPECT_FALSE(board.rows[1].msr.has_value());
  EXPECT_EQ(board.rows[1].rank, 2u);
  EXPECT_NE(format_leaderboard(board).find(" -"), std::string::npos);
}

TEST(Leaderboard, AnonymizationIsABijectionPerEmission) {
  const auto roster = league_roster();
  std::set<std::vector<std::string>> orders;
  for (int day = 1; day <= 30; ++day) {
    char date[16];
    std::snprintf(date, sizeof date, "2022-06-%02d", day);
    const auto labels = anonymize(roster, date, 7);
    std::set<std::string> teams, names;
    std::vector<std::string> order;
    for (const auto& [team, label] : labels) {
      teams.insert(team);
      names.insert(label);
      order.push_back(label);
    }
    EXPECT_EQ(teams.size(), roster.size());
    EXPECT_EQ(names.size(), roster.size());
    EXPECT_EQ(*names.begin(), "Team A");
    orders.insert(order);
  }
  EXPECT_GT(orders.size(), 20u);
}

TEST(Leaderboard, SeedChangesTheLabels) {
  EXPECT_NE(anonymize(league_roster(), "2022-06-15", 7), anonymize(league_roster(), "2022-06-15", 8));
}

TEST(Leaderboard, RosterErrors) {
  const std::vector<InteractionRecord> rs{record("alpha", "2022-06-01T09:00:00Z", true)};
  EXPECT_ARENA_ERROR(emit_leaderboard(rs, {}, "2022-06-01"), ErrorCode::SchemaError);
  EXPECT_ARENA_ERROR(emit_leaderboard(rs, {"beta"}, "2022-06-01"), ErrorCode::SchemaError);
  EXPECT_ARENA_ERROR(emit_leaderboard(rs, {"alpha", "alpha"}, "2022-06-01"), ErrorCode::SchemaError);
  EXPECT_ARENA_ERROR(emit_leaderboard(rs, {"alpha"}, "June 1"), ErrorCode::SchemaError);
}

TEST(Leaderboard, JsonKeepsRawFractions) {
  const std::vector<InteractionRecord> rs{record("alpha", "2022-06-01T09:00:00Z", true, 4),
                                          record("alpha", "2022-06-01T10:00:00Z", false),
                                          record("alpha", "2022-06-01T11:00:00Z", false)};
  const json j = leaderboard_to_json(emit_leaderboard(rs, {"alpha"}, "2022-06-01"));
  EXPECT_EQ(j.at("schema"), kLeaderboardSchema);
  EXPECT_DOUBLE_EQ(j.at("rows")[0].at("msr").get<double>(), 1.0 / 3.0);
  EXPECT_EQ(j.at("rows")[0].at("n_rated"), 1);
  EXPECT_TRUE(j.at("abandoned_sessions_count_as_failures").get<bool>());
}

// --------------------------------------------------------- record store

TEST(RecordStoreTest, AppendsAreReadBackInOrder) {
  testing::TempDir dir;
  RecordStore store(dir / "records.ndjson");
  const auto rs = league();
  for (std::size_t i = 0; i < 50; ++i) store.append(rs[i]);
  const auto back = store.snapshot();
  ASSERT_EQ(back.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(back[i], rs[i]);
}

TEST(RecordStoreTest, ConcurrentAppendsKeepWholeLines) {
  testing::TempDir dir;
  RecordStore store(dir / "records.ndjson");
  std::vector<std::thread> workers;
  for (int t = 0; t < 8; ++t)
    workers.emplace_back([&store, t] {
      for (int i = 0; i < 100; ++i) store.append(record("team" + std::to_string(t), "2022-06-01T10:00:00Z", i % 2 == 0, 3));
    });
  for (auto& w : workers) w.join();
  const auto back = RecordStore::read(dir / "records.ndjson");
  EXPECT_EQ(back.size(), 800u);
  EXPECT_DOUBLE_EQ(*msr(back), 0.5);
}

TEST(RecordStoreTest, RejectsBadLines) {
  testing::TempDir dir;
  std::ofstream(dir / "bad.ndjson") << R"({"team_id":"a","timestamp":"2022-06-01T10:00:00Z","mission_id":"m","mission_seen":true,"success":true,"rating":9})"
                                    << "\n";
  EXPECT_ARENA_ERROR(RecordStore::read(dir / "bad.ndjson"), ErrorCode::ScoreOutOfRange);
  std::ofstream(dir / "garbled.ndjson") << "{not json\n";
  EXPECT_ARENA_ERROR(RecordStore::read(dir / "garbled.ndjson"), ErrorCode::SchemaError);
  EXPECT_ARENA_ERROR(RecordStore::read(dir / "missing.ndjson"), ErrorCode::IoError);
}

TEST(Timestamps, RoundTripInUtc) {
  EXPECT_EQ(format_timestamp(parse_timestamp("2022-12-31T23:59:59Z")), "2022-12-31T23:59:59Z");
  EXPECT_EQ(end_of_day("2022-06-15"), parse_timestamp("2022-06-15T23:59:59Z"));
  EXPECT_ARENA_ERROR(parse_timestamp("2022-06-15 10:00:00"), ErrorCode::SchemaError);
  EXPECT_ARENA_ERROR(parse_timestamp("2022-06-15T10:00:00+02:00"), ErrorCode::SchemaError);
}

}  // namespace
}  // namespace arena
