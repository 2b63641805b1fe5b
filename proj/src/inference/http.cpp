#include "arena/inference/http.hpp"

#include <httplib.h>

#include "arena/core/error.hpp"

namespace arena {

using nlohmann::json;

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::SchemaError, "inference url needs a scheme: " + url);
  const auto path = url.find('/', scheme + 3);
  if (path == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path), prefix};
}

template <typename Rep, typename Period>
void set_timeouts(httplib::Client& client, std::chrono::duration<Rep, Period> t) {
  client.set_connection_timeout(t);
  client.set_read_timeout(t);
  client.set_write_timeout(t);
}

std::string error_body(const Error& e) {
  return json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump();
}

}  // namespace

HttpInferenceClient::HttpInferenceClient(std::string url) : url_(std::move(url)) {
  std::tie(origin_, prefix_) = split_url(url_);
}

InferenceResponse HttpInferenceClient::infer(const InferenceRequest& request, std::chrono::milliseconds deadline) {
  const auto started = std::chrono::steady_clock::now();
  httplib::Client client(origin_);
  set_timeouts(client, deadline);
  auto res = client.Post(prefix_ + "/infer", serialize(request), "application/json");
  const auto elapsed = std::chrono::steady_clock::now() - started;
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout || elapsed >= deadline)
      throw Error(ErrorCode::InferenceTimeout, "no reply from " + url_ + " within " + std::to_string(deadline.count()) + " ms");
    throw Error(ErrorCode::InferenceProtocolError, url_ + ": " + httplib::to_string(err));
  }
  if (elapsed > deadline)
    throw Error(ErrorCode::InferenceTimeout, "reply from " + url_ + " arrived after the deadline");
  if (res->status != 200)
    throw Error(ErrorCode::InferenceProtocolError, url_ + " answered HTTP " + std::to_string(res->status));
  return parse_response(res->body);
}

bool HttpInferenceClient::healthy(std::chrono::milliseconds timeout) const {
  httplib::Client client(origin_);
  set_timeouts(client, timeout);
  auto res = client.Get(prefix_ + "/healthz");
  return res && res->status == 200;
}

void mount_inference_routes(httplib::Server& server, BaselineService& service) {
  server.Post("/infer", [&service](const httplib::Request& req, httplib::Response& res) {
    try {
      InferenceRequest request = parse_request(req.body);
      validate(request);
      res.set_content(serialize(service.infer(request)), "application/json");
    } catch (const Error& e) {
      res.status = 400;
      res.set_content(error_body(e), "application/json");
    }
  });
  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });
}

}  // namespace arena
