#include "arena/metrics/records.hpp"

#include <cstdio>
#include <ctime>

#include "arena/core/error.hpp"

namespace arena {

using nlohmann::json;

std::string format_timestamp(Timestamp t) {
  const std::time_t tt = t.time_since_epoch().count();
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  std::tm tm{};
  char z = 0;
  const std::string s(text);
  const int n = std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &tm.tm_year, &tm.tm_mon, &tm.tm_mday, &tm.tm_hour,
                            &tm.tm_min, &tm.tm_sec, &z);
  if (n != 7 || z != 'Z' || s.size() != 20) throw Error(ErrorCode::SchemaError, "bad UTC timestamp '" + s + "'");
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  return Timestamp{std::chrono::seconds{timegm(&tm)}};
}

Timestamp end_of_day(std::string_view date) {
  if (date.size() != 10) throw Error(ErrorCode::SchemaError, "bad date '" + std::string(date) + "', want YYYY-MM-DD");
  return parse_timestamp(std::string(date) + "T23:59:59Z");
}

void to_json(json& j, const InteractionRecord& r) {
  j = json{{"team_id", r.team_id},          {"timestamp", format_timestamp(r.timestamp)},
           {"mission_id", r.mission_id},    {"mission_seen", r.mission_seen},
           {"success", r.success},          {"rating", r.rating ? json(*r.rating) : json(nullptr)}};
}

void from_json(const json& j, InteractionRecord& r) {
  r.team_id = j.at("team_id").get<std::string>();
  r.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
  r.mission_id = j.at("mission_id").get<std::string>();
  r.mission_seen = j.at("mission_seen").get<bool>();
  r.success = j.at("success").get<bool>();
  r.rating.reset();
  if (j.contains("rating") && !j["rating"].is_null()) {
    const int score = j["rating"].get<int>();
    if (score < 1 || score > 5) throw Error(ErrorCode::ScoreOutOfRange, "rating " + std::to_string(score));
    r.rating = score;
  }
}

RecordStore::RecordStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::app | std::ios::binary);
  if (!out_) throw Error(ErrorCode::IoError, "cannot open record store " + path_.string());
}

void RecordStore::append(const InteractionRecord& r) {
  const std::string line = json(r).dump() + "\n";
  std::lock_guard lock(mu_);
  out_ << line;
  out_.flush();
}

std::vector<InteractionRecord> RecordStore::snapshot() const {
  std::lock_guard lock(mu_);
  return read(path_);
}

std::vector<InteractionRecord> RecordStore::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::vector<InteractionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line).get<InteractionRecord>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SchemaError, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace arena
