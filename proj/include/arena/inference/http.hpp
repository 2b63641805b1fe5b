#pragma once

#include <string>

#include "arena/inference/baseline.hpp"
#include "arena/inference/protocol.hpp"

namespace httplib {
class Server;
}

namespace arena {

// Speaks simbot-infer/1 to a remote Action Inference Service. `url` is the
// service base (http://host:port, optionally with a path prefix); requests
// go to <url>/infer.
class HttpInferenceClient : public InferenceClient {
 public:
  explicit HttpInferenceClient(std::string url);

  // Throws InferenceTimeout when no complete reply arrives before the
  // deadline, InferenceProtocolError for transport failures and non-200
  // replies, MalformedPayload for undecodable bodies.
  InferenceResponse infer(const InferenceRequest& request, std::chrono::milliseconds deadline) override;
  // GET <url>/healthz answered with 200.
  bool healthy(std::chrono::milliseconds timeout = std::chrono::milliseconds(1000)) const;

  const std::string& url() const { return url_; }

 private:
  std::string url_;
  std::string origin_;
  std::string prefix_;
};

// POST /infer and GET /healthz backed by the baseline service.
void mount_inference_routes(httplib::Server& server, BaselineService& service);

}  // namespace arena
