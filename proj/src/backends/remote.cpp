#include "rlm/backends/remote.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "rlm/backends/wire.hpp"

namespace rlm {

namespace detail {

// One client per channel; httplib clients serialize per-connection, which is
// fine behind the service batcher. Requests retry on transport errors, 429
// and 5xx; other statuses fail immediately.
class HttpChannel {
 public:
  explicit HttpChannel(RemoteOptions options)
      : options_(std::move(options)), client_(options_.base_url) {
    client_.set_connection_timeout(0, options_.timeout_ms * 1000LL);
    client_.set_read_timeout(options_.timeout_ms / 1000, (options_.timeout_ms % 1000) * 1000);
    client_.set_write_timeout(options_.timeout_ms / 1000, (options_.timeout_ms % 1000) * 1000);
  }

  nlohmann::json post(const std::string& path, const nlohmann::ordered_json& body) {
    const std::string payload = body.dump();
    const httplib::Headers headers{{kProtoHeader, kProtoVersion}};
    int backoff_ms = options_.retry.initial_backoff_ms;
    int last_status = 0;
    for (int attempt = 1; attempt <= options_.retry.max_attempts; ++attempt) {
      httplib::Result res = client_.Post(path, headers, payload, "application/json");
      if (res) {
        last_status = res->status;
        if (res->status >= 200 && res->status < 300) {
          try {
            return nlohmann::json::parse(res->body);
          } catch (const nlohmann::json::exception& e) {
            throw MalformedResponse(std::string("response is not valid JSON: ") + e.what());
          }
        }
        const bool retryable = res->status == 429 || res->status >= 500;
        if (!retryable) {
          throw BackendFailure("backend " + options_.base_url + path + " returned status " +
                                   std::to_string(res->status),
                               attempt, res->status);
        }
      }
      if (attempt < options_.retry.max_attempts) {
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
        backoff_ms = static_cast<int>(backoff_ms * options_.retry.backoff_multiplier);
      }
    }
    throw BackendFailure("backend " + options_.base_url + path + " unavailable after " +
                             std::to_string(options_.retry.max_attempts) + " attempts",
                         options_.retry.max_attempts, last_status);
  }

 private:
  RemoteOptions options_;
  httplib::Client client_;
};

}  // namespace detail

RemotePolicy::RemotePolicy(RemoteOptions options)
    : channel_(std::make_unique<detail::HttpChannel>(std::move(options))) {}

RemotePolicy::~RemotePolicy() = default;

std::vector<ReasoningStep> RemotePolicy::generate(const State& state, int m,
                                                  const DiversityParams& params) {
  return generate_batch({state}, m, params).front();
}

std::vector<std::vector<ReasoningStep>> RemotePolicy::generate_batch(
    const std::vector<State>& states, int m, const DiversityParams& params) {
  if (states.empty()) throw InvalidConfig("generate_batch requires a non-empty batch");
  const nlohmann::json body =
      channel_->post(kGeneratePath, wire_generate_request(states, m, params.temperature));
  return wire_parse_candidates(body, states.size());
}

RemoteValue::RemoteValue(RemoteOptions options)
    : channel_(std::make_unique<detail::HttpChannel>(std::move(options))) {}

RemoteValue::~RemoteValue() = default;

std::vector<double> RemoteValue::score(const std::vector<State>& states) {
  if (states.empty()) throw InvalidConfig("score requires a non-empty batch");
  const nlohmann::json body = channel_->post(kScorePath, wire_score_request(states));
  return wire_parse_scores(body, states.size());
}

bool probe_backend(const std::string& base_url, int timeout_ms) {
  httplib::Client client(base_url);
  client.set_connection_timeout(0, timeout_ms * 1000LL);
  client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
  httplib::Result res = client.Get(kHealthPath);
  return res && res->status >= 200 && res->status < 300;
}

}  // namespace rlm
