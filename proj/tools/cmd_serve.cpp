#include <csignal>
#include <iostream>
#include <thread>

#include <httplib.h>

#include "arena/inference/baseline.hpp"
#include "arena/inference/http.hpp"
#include "arena/session/config.hpp"
#include "arena/session/http_api.hpp"
#include "cli_common.hpp"

namespace arena::cli {

namespace {

// Blocks SIGINT and SIGTERM for every thread and stops the server from a
// dedicated waiter thread once one arrives.
class ShutdownOnSignal {
 public:
  explicit ShutdownOnSignal(std::function<void()> stop) {
    sigemptyset(&set_);
    sigaddset(&set_, SIGINT);
    sigaddset(&set_, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set_, nullptr);
    waiter_ = std::thread([this, stop = std::move(stop)] {
      int sig = 0;
      sigwait(&set_, &sig);
      if (!done_) stop();
    });
  }
  ~ShutdownOnSignal() {
    done_ = true;
    pthread_kill(waiter_.native_handle(), SIGTERM);
    waiter_.join();
  }

 private:
  sigset_t set_;
  std::atomic<bool> done_{false};
  std::thread waiter_;
};

int listen(httplib::Server& server, const std::string& host, int port, std::string_view what) {
  const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  std::cout << what << " listening on http://" << host << ":" << bound << std::endl;
  return bound;
}

struct ServeArgs {
  std::string config;
  std::optional<int> port;
};

void run_serve(const DataPaths& paths, const ServeArgs& args) {
  ServeConfig cfg = args.config.empty() ? parse_serve_config(nlohmann::json::object()) : load_serve_config(args.config);
  if (args.port) cfg.port = *args.port;
  DataPaths data = cfg.data_dir.empty() ? paths : DataPaths{cfg.data_dir};
  const auto scenes = load_scenes(data);
  const auto catalog = MissionCatalog::load(cfg.catalog_dir.empty() ? data.missions() : cfg.catalog_dir, scenes);

  std::unique_ptr<BaselineService> baseline;
  std::vector<std::unique_ptr<InferenceClient>> clients;
  std::map<std::string, InferenceClient*> by_team;
  for (const auto& [team, endpoint] : cfg.endpoints) {
    if (endpoint == "builtin") {
      if (!baseline) baseline = std::make_unique<BaselineService>(GroundingLexicon::build(scenes));
      clients.push_back(std::make_unique<LocalInferenceClient>(*baseline));
    } else {
      clients.push_back(std::make_unique<HttpInferenceClient>(endpoint));
    }
    by_team[team] = clients.back().get();
  }

  std::unique_ptr<SessionStore> store;
  if (!cfg.store_path.empty()) store = std::make_unique<SqliteSessionStore>(cfg.store_path);
  std::unique_ptr<RecordStore> records;
  if (!cfg.records_path.empty()) records = std::make_unique<RecordStore>(cfg.records_path);

  SessionManager manager(cfg.session, catalog, scenes, *by_team.at(cfg.session.team_id), store.get(), records.get());
  for (const auto& [team, client] : by_team) {
    if (team != cfg.session.team_id) manager.add_team(team, *client);
  }

  httplib::Server server;
  SessionApi api(manager);
  api.mount(server);
  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });

  std::mutex mu;
  std::condition_variable cv;
  bool stopping = false;
  ShutdownOnSignal on_signal([&] {
    {
      std::lock_guard lock(mu);
      stopping = true;
    }
    cv.notify_all();
    api.shutdown();
    server.stop();
  });
  std::thread sweeper([&] {
    std::unique_lock lock(mu);
    while (!cv.wait_for(lock, cfg.sweep_interval, [&] { return stopping; })) {
      lock.unlock();
      if (const auto n = manager.sweep_abandoned()) std::cout << "abandoned " << n << " idle session(s)" << std::endl;
      lock.lock();
    }
  });

  listen(server, cfg.host, cfg.port, "session service");
  server.listen_after_bind();
  {
    std::lock_guard lock(mu);
    stopping = true;
  }
  cv.notify_all();
  sweeper.join();
}

struct InferServeArgs {
  std::string host = "127.0.0.1";
  int port = 8081;
};

void run_infer_serve(const DataPaths& paths, const InferServeArgs& args) {
  const auto scenes = load_scenes(paths);
  BaselineService service(GroundingLexicon::build(scenes));
  httplib::Server server;
  mount_inference_routes(server, service);
  ShutdownOnSignal on_signal([&] { server.stop(); });
  listen(server, args.host, args.port, "baseline inference service");
  server.listen_after_bind();
}

}  // namespace

void register_serve_commands(CLI::App& app, DataPaths& paths) {
  auto serve_args = std::make_shared<ServeArgs>();
  auto* serve = app.add_subcommand("serve", "Run the session service (HTTP API and event streams)");
  serve->add_option("--config", serve_args->config, "JSON config file; ARENA_* environment variables override it");
  serve->add_option("--port", serve_args->port, "Port to listen on (0 picks a free port)");
  serve->callback([&paths, serve_args] { run_serve(paths, *serve_args); });

  auto infer_args = std::make_shared<InferServeArgs>();
  auto* infer = app.add_subcommand("infer-serve", "Run the baseline agent as an HTTP inference service");
  infer->add_option("--host", infer_args->host, "Address to bind");
  infer->add_option("--port", infer_args->port, "Port to listen on (0 picks a free port)");
  infer->callback([&paths, infer_args] { run_infer_serve(paths, *infer_args); });
}

}  // namespace arena::cli
