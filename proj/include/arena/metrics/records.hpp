#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace arena {

using Timestamp = std::chrono::sys_seconds;

// "2023-01-05T12:00:00Z" <-> seconds since the epoch, always UTC.
std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(std::string_view text);  // throws Error{SchemaError}
// "2023-01-05": the end of that UTC day (23:59:59), the leaderboard's "at".
Timestamp end_of_day(std::string_view date);

struct InteractionRecord {
  std::string team_id;
  Timestamp timestamp;
  std::string mission_id;
  bool mission_seen = true;
  bool success = false;
  std::optional<int> rating;

  friend bool operator==(const InteractionRecord&, const InteractionRecord&) = default;
};

void to_json(nlohmann::json& j, const InteractionRecord& r);
void from_json(const nlohmann::json& j, InteractionRecord& r);  // validates rating range

class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual void append(const InteractionRecord& r) = 0;
};

// Append-only newline-delimited JSON file; one record per line.
class RecordStore : public RecordSink {
 public:
  explicit RecordStore(std::filesystem::path path);
  void append(const InteractionRecord& r) override;
  std::vector<InteractionRecord> snapshot() const;
  const std::filesystem::path& path() const { return path_; }

  static std::vector<InteractionRecord> read(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::ofstream out_;
};

}  // namespace arena
