#include "rlm/service/http.hpp"

#include <filesystem>
#include <fstream>

#include <httplib.h>

#include "rlm/backends/remote.hpp"
#include "rlm/core/serialize.hpp"

namespace rlm {

using nlohmann::json;
using nlohmann::ordered_json;

EngineService::EngineService(EngineConfig cfg)
    : cfg_(std::move(cfg)), backends_(build_backends(cfg_)),
      server_(std::make_unique<httplib::Server>()) {
  server_->new_task_queue = [] { return new httplib::ThreadPool(32); };
  route();
}

EngineService::~EngineService() { stop(); }

void EngineService::route() {
  server_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });

  server_->Post("/v1/solve", [this](const httplib::Request& req, httplib::Response& res) {
    json body;
    std::optional<SearchConfig> override_cfg;
    std::string question;
    try {
      body = json::parse(req.body);
      question = body.value("question", std::string());
      if (question.empty()) throw InvalidConfig("question must be non-empty");
      if (body.contains("overrides")) {
        // merge overrides onto the configured search parameters
        json merged = config_to_json(cfg_.search);
        merged.update(body.at("overrides"));
        override_cfg = config_from_json(merged);
      }
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(ordered_json{{"error", std::string("bad request: ") + e.what()}}.dump(),
                      "application/json");
      return;
    } catch (const Error& e) {
      res.status = 400;
      res.set_content(ordered_json{{"error", e.what()}}.dump(), "application/json");
      return;
    }

    try {
      SolveResult result = solve_question(cfg_, backends_, question, std::nullopt,
                                          override_cfg);
      const MctsOutcome& out = result.outcome;
      if (!out.best_path) {
        res.status = out.errors.empty() ? 500 : 503;
        if (res.status == 503) res.set_header("Retry-After", "1");
        ordered_json err{{"error", "no reasoning path found"}, {"details", out.errors}};
        res.set_content(err.dump(), "application/json");
        return;
      }
      ordered_json steps = ordered_json::array();
      for (const auto& s : out.best_path->states.back().steps()) {
        steps.push_back(step_to_json(s));
      }
      ordered_json reply{{"best_path", steps},
                         {"terminal", out.best_path->terminal},
                         {"q", out.tree.stats(*out.best_node).q},
                         {"tree_ref", result.tree_id},
                         {"iterations_run", out.iterations_run},
                         {"terminals_found", out.terminals_found}};
      res.set_content(reply.dump(), "application/json");
    } catch (const BackendFailure& e) {
      res.status = 503;
      res.set_header("Retry-After", "1");
      res.set_content(ordered_json{{"error", e.what()}}.dump(), "application/json");
    } catch (const StateNotInEnv& e) {
      res.status = 400;
      res.set_content(ordered_json{{"error", e.what()}}.dump(), "application/json");
    } catch (const Error& e) {
      res.status = 500;
      res.set_content(ordered_json{{"error", e.what()}}.dump(), "application/json");
    }
  });

  server_->Get("/v1/trees/([0-9a-f]+)", [this](const httplib::Request& req,
                                               httplib::Response& res) {
    const std::string id = req.matches[1];
    const std::filesystem::path path =
        std::filesystem::path(cfg_.persist_dir) / (id + ".json");
    std::ifstream in(path);
    if (!in) {
      res.status = 404;
      res.set_content(ordered_json{{"error", "unknown tree " + id}}.dump(),
                      "application/json");
      return;
    }
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    res.set_content(content, "application/json");
  });
}

void EngineService::start(const std::string& host, int port) {
  if (cfg_.policy.kind == "remote" && !probe_backend(cfg_.policy.url)) {
    throw BackendFailure("policy backend unreachable at " + cfg_.policy.url, 1, 0);
  }
  if (cfg_.value.kind == "remote" && !probe_backend(cfg_.value.url)) {
    throw BackendFailure("value backend unreachable at " + cfg_.value.url, 1, 0);
  }

  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    if (port_ <= 0) throw Error("cannot bind service socket");
  } else {
    if (!server_->bind_to_port(host, port)) {
      throw Error("cannot bind service port " + std::to_string(port));
    }
    port_ = port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void EngineService::stop() {
  if (server_ && server_->is_running()) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace rlm
