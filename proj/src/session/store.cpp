#include "arena/session/store.hpp"

#include <sqlite3.h>

#include "arena/core/error.hpp"

namespace arena {

void MemorySessionStore::put(const std::string& session_id, const nlohmann::json& doc) {
  std::lock_guard lock(mu_);
  docs_[session_id] = doc.dump();
}

std::vector<nlohmann::json> MemorySessionStore::load_all() const {
  std::lock_guard lock(mu_);
  std::vector<nlohmann::json> out;
  for (const auto& [id, text] : docs_) out.push_back(nlohmann::json::parse(text));
  return out;
}

namespace {

void check(sqlite3* db, int rc, const char* what) {
  if (rc != SQLITE_OK && rc != SQLITE_DONE && rc != SQLITE_ROW)
    throw Error(ErrorCode::IoError, std::string(what) + ": " + sqlite3_errmsg(db));
}

struct Statement {
  sqlite3_stmt* stmt = nullptr;
  Statement(sqlite3* db, const char* sql) { check(db, sqlite3_prepare_v2(db, sql, -1, &stmt, nullptr), "prepare"); }
  ~Statement() { sqlite3_finalize(stmt); }
};

}  // namespace

SqliteSessionStore::SqliteSessionStore(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (sqlite3_open(path.c_str(), &db_) != SQLITE_OK) {
    const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw Error(ErrorCode::IoError, "cannot open session store " + path.string() + ": " + msg);
  }
  check(db_,
        sqlite3_exec(db_,
                     "PRAGMA journal_mode=WAL;"
                     "CREATE TABLE IF NOT EXISTS sessions (session_id TEXT PRIMARY KEY, doc TEXT NOT NULL);",
                     nullptr, nullptr, nullptr),
        "create table");
}

SqliteSessionStore::~SqliteSessionStore() { sqlite3_close(db_); }

void SqliteSessionStore::put(const std::string& session_id, const nlohmann::json& doc) {
  const std::string text = doc.dump();
  std::lock_guard lock(mu_);
  Statement st(db_, "INSERT OR REPLACE INTO sessions (session_id, doc) VALUES (?1, ?2)");
  sqlite3_bind_text(st.stmt, 1, session_id.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_text(st.stmt, 2, text.c_str(), static_cast<int>(text.size()), SQLITE_TRANSIENT);
  check(db_, sqlite3_step(st.stmt), "store session");
}

std::vector<nlohmann::json> SqliteSessionStore::load_all() const {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT doc FROM sessions ORDER BY session_id");
  std::vector<nlohmann::json> out;
  int rc;
  while ((rc = sqlite3_step(st.stmt)) == SQLITE_ROW) {
    const auto* text = reinterpret_cast<const char*>(sqlite3_column_text(st.stmt, 0));
    out.push_back(nlohmann::json::parse(text));
  }
  check(db_, rc, "load sessions");
  return out;
}

}  // namespace arena
