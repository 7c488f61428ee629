#ifndef RLM_BACKENDS_REMOTE_HPP_
#define RLM_BACKENDS_REMOTE_HPP_

#include <memory>
#include <string>
#include <vector>

#include "rlm/backends/backend.hpp"

namespace rlm {

struct RemoteOptions {
  std::string base_url;  // e.g. "http://127.0.0.1:8801"
  RetryPolicy retry;
  int timeout_ms = 30000;
};

namespace detail {
class HttpChannel;
}

/// Batched HTTP client for a policy server. One wire request per batch;
/// transport failures and 5xx retry with exponential backoff up to
/// retry.max_attempts; responses are validated and positionally aligned.
class RemotePolicy : public PolicyBackend {
 public:
  explicit RemotePolicy(RemoteOptions options);
  ~RemotePolicy() override;

  std::vector<ReasoningStep> generate(const State& state, int m,
                                      const DiversityParams& params) override;
  std::vector<std::vector<ReasoningStep>> generate_batch(
      const std::vector<State>& states, int m, const DiversityParams& params) override;

 private:
  std::unique_ptr<detail::HttpChannel> channel_;
};

class RemoteValue : public ValueBackend {
 public:
  explicit RemoteValue(RemoteOptions options);
  ~RemoteValue() override;

  std::vector<double> score(const std::vector<State>& states) override;

 private:
  std::unique_ptr<detail::HttpChannel> channel_;
};

/// GET /healthz with a short timeout.
bool probe_backend(const std::string& base_url, int timeout_ms = 2000);

}  // namespace rlm

#endif  // RLM_BACKENDS_REMOTE_HPP_
