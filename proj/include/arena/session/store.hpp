#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

struct sqlite3;

namespace arena {

// Key-value persistence for session documents.
class SessionStore {
 public:
  virtual ~SessionStore() = default;
  virtual void put(const std::string& session_id, const nlohmann::json& doc) = 0;
  virtual std::vector<nlohmann::json> load_all() const = 0;
};

class MemorySessionStore : public SessionStore {
 public:
  void put(const std::string& session_id, const nlohmann::json& doc) override;
  std::vector<nlohmann::json> load_all() const override;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::string> docs_;
};

// One SQLite table, (session_id TEXT PRIMARY KEY, doc TEXT).
class SqliteSessionStore : public SessionStore {
 public:
  explicit SqliteSessionStore(const std::filesystem::path& path);
  ~SqliteSessionStore() override;
  SqliteSessionStore(const SqliteSessionStore&) = delete;
  SqliteSessionStore& operator=(const SqliteSessionStore&) = delete;

  void put(const std::string& session_id, const nlohmann::json& doc) override;
  std::vector<nlohmann::json> load_all() const override;

 private:
  mutable std::mutex mu_;
  sqlite3* db_ = nullptr;
};

}  // namespace arena
