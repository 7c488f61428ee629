#ifndef RLM_SERVICE_BATCHING_HPP_
#define RLM_SERVICE_BATCHING_HPP_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <future>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "rlm/backends/backend.hpp"

namespace rlm {

struct BatchingConfig {
  int max_batch = 8;        // states per wire request
  int max_inflight = 4;     // concurrent inner calls
  int queue_timeout_ms = 5; // flush age of the oldest queued request
  bool enabled = true;

  void validate() const;
};

struct BatchCounters {
  std::uint64_t requests = 0;       // caller-side calls
  std::uint64_t batches = 0;        // inner calls issued
  std::uint64_t coalesced = 0;      // inner calls serving >1 caller request
  std::uint64_t max_batch_states = 0;
};

/// Coalesces concurrent score() calls into larger inner batches. Whole
/// requests are never split across inner calls, so positional alignment is
/// preserved by construction.
class BatchingValue : public ValueBackend {
 public:
  BatchingValue(std::shared_ptr<ValueBackend> inner, BatchingConfig cfg);
  ~BatchingValue() override;

  std::vector<double> score(const std::vector<State>& states) override;

  BatchCounters counters() const;

 private:
  struct Pending {
    const std::vector<State>* states;
    std::promise<std::vector<double>> promise;
    std::chrono::steady_clock::time_point enqueued;
  };

  void worker_loop();

  std::shared_ptr<ValueBackend> inner_;
  BatchingConfig cfg_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Pending> queue_;
  bool stopping_ = false;
  BatchCounters counters_;
  std::vector<std::thread> workers_;
};

/// Same idea for generate calls; only requests with identical (m,
/// temperature, distinct) parameters are merged into one inner batch.
class BatchingPolicy : public PolicyBackend {
 public:
  BatchingPolicy(std::shared_ptr<PolicyBackend> inner, BatchingConfig cfg);
  ~BatchingPolicy() override;

  std::vector<ReasoningStep> generate(const State& state, int m,
                                      const DiversityParams& params) override;
  std::vector<std::vector<ReasoningStep>> generate_batch(
      const std::vector<State>& states, int m, const DiversityParams& params) override;

  BatchCounters counters() const;

 private:
  struct Pending {
    const std::vector<State>* states;
    int m;
    DiversityParams params;
    std::promise<std::vector<std::vector<ReasoningStep>>> promise;
    std::chrono::steady_clock::time_point enqueued;
  };

  void worker_loop();

  std::shared_ptr<PolicyBackend> inner_;
  BatchingConfig cfg_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Pending> queue_;
  bool stopping_ = false;
  BatchCounters counters_;
  std::vector<std::thread> workers_;
};

}  // namespace rlm

#endif  // RLM_SERVICE_BATCHING_HPP_
