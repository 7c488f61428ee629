#ifndef RLM_SERVICE_HTTP_HPP_
#define RLM_SERVICE_HTTP_HPP_

#include <memory>
#include <string>
#include <thread>

#include "rlm/service/engine.hpp"

namespace httplib {
class Server;
}

namespace rlm {

/// Engine HTTP service:
///   POST /v1/solve      {question, overrides?} -> {best_path, terminal, q, tree_ref}
///   GET  /v1/trees/<id> -> persisted tree document
///   GET  /healthz
/// Backend outages surface as 503 with a Retry-After header; invalid
/// questions or overrides as 400.
class EngineService {
 public:
  explicit EngineService(EngineConfig cfg);
  ~EngineService();

  EngineService(const EngineService&) = delete;
  EngineService& operator=(const EngineService&) = delete;

  /// Probes remote backends, binds (port 0 picks a free port) and serves on
  /// a background thread. Throws BackendFailure if a backend probe fails.
  void start(const std::string& host, int port);
  void stop();

  int port() const { return port_; }
  const EngineConfig& config() const { return cfg_; }
  EngineBackends& backends() { return backends_; }

 private:
  void route();

  EngineConfig cfg_;
  EngineBackends backends_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace rlm

#endif  // RLM_SERVICE_HTTP_HPP_
