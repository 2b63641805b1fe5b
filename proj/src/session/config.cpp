#include "arena/session/config.hpp"

#include <cstdlib>
#include <fstream>

#include "arena/core/error.hpp"

namespace arena {

using nlohmann::json;

namespace {

long long to_integer(const std::string& name, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::SchemaError, name + " must be an integer, got '" + text + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j[key].get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::SchemaError, std::string("config field ") + key + " has the wrong type");
  }
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

ServeConfig parse_serve_config(const json& doc, const EnvLookup& env, const std::filesystem::path& base) {
  if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "config must be a JSON object");
  ServeConfig c;
  std::string data, catalog, store, records;
  read(doc, "host", c.host);
  read(doc, "port", c.port);
  read(doc, "data_dir", data);
  read(doc, "catalog_dir", catalog);
  read(doc, "store", store);
  read(doc, "records", records);
  read(doc, "team_id", c.session.team_id);
  read(doc, "highlight_ms", c.session.highlight_ms);
  read(doc, "max_active_sessions", c.session.max_active_sessions);
  for (std::string* p : {&data, &catalog, &store, &records}) {
    if (!p->empty() && std::filesystem::path(*p).is_relative()) *p = (base / *p).string();
  }
  long long abandon = c.session.abandon_after.count();
  read(doc, "abandon_after_s", abandon);
  long long sweep = c.sweep_interval.count();
  read(doc, "sweep_interval_s", sweep);
  if (doc.contains("limits")) {
    const json& l = doc["limits"];
    auto& t = c.session.limits;
    read(l, "max_actions_per_turn", t.max_actions_per_turn);
    read(l, "max_failures_per_turn", t.max_failures_per_turn);
    read(l, "max_inference_rounds_per_turn", t.max_inference_rounds_per_turn);
    long long deadline = t.inference_deadline.count();
    read(l, "inference_deadline_ms", deadline);
    t.inference_deadline = std::chrono::milliseconds(deadline);
  }
  if (doc.contains("endpoints")) {
    c.endpoints.clear();
    read(doc, "endpoints", c.endpoints);
  }

  auto override_string = [&](const char* name, std::string& out) {
    if (auto v = env(name)) out = *v;
  };
  auto override_int = [&](const char* name, auto& out) {
    if (auto v = env(name)) out = static_cast<std::remove_reference_t<decltype(out)>>(to_integer(name, *v));
  };
  override_string("ARENA_HOST", c.host);
  override_int("ARENA_PORT", c.port);
  override_string("ARENA_DATA", data);
  override_string("ARENA_CATALOG", catalog);
  override_string("ARENA_STORE", store);
  override_string("ARENA_RECORDS", records);
  override_string("ARENA_TEAM", c.session.team_id);
  override_int("ARENA_MAX_ACTIONS_PER_TURN", c.session.limits.max_actions_per_turn);
  override_int("ARENA_MAX_FAILURES_PER_TURN", c.session.limits.max_failures_per_turn);
  override_int("ARENA_MAX_INFERENCE_ROUNDS", c.session.limits.max_inference_rounds_per_turn);
  override_int("ARENA_ABANDON_AFTER_S", abandon);
  if (auto v = env("ARENA_INFERENCE_DEADLINE_MS"))
    c.session.limits.inference_deadline = std::chrono::milliseconds(to_integer("ARENA_INFERENCE_DEADLINE_MS", *v));
  if (auto v = env("ARENA_INFERENCE_URL")) c.endpoints[c.session.team_id] = *v;

  c.data_dir = data;
  c.catalog_dir = catalog.empty() ? (data.empty() ? std::filesystem::path() : c.data_dir / "missions")
                                  : std::filesystem::path(catalog);
  c.store_path = store;
  c.records_path = records;
  c.session.abandon_after = std::chrono::seconds(abandon);
  c.sweep_interval = std::chrono::seconds(sweep);

  c.session.limits.validate();
  if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::SchemaError, "port out of range");
  if (c.session.abandon_after.count() <= 0 || c.sweep_interval.count() <= 0)
    throw Error(ErrorCode::SchemaError, "abandon_after_s and sweep_interval_s must be positive");
  if (!c.endpoints.count(c.session.team_id))
    throw Error(ErrorCode::SchemaError, "no inference endpoint for default team " + c.session.team_id);
  return c;
}

ServeConfig load_serve_config(const std::filesystem::path& path, const EnvLookup& env) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_serve_config(doc, env, path.parent_path());
}

}  // namespace arena
