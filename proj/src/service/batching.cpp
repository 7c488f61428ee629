#include "rlm/service/batching.hpp"

#include <algorithm>

namespace rlm {

void BatchingConfig::validate() const {
  if (max_batch < 1) throw InvalidConfig("max_batch must be positive");
  if (max_inflight < 1) throw InvalidConfig("max_inflight must be positive");
  if (queue_timeout_ms < 0) throw InvalidConfig("queue_timeout_ms must be non-negative");
}

BatchingValue::BatchingValue(std::shared_ptr<ValueBackend> inner, BatchingConfig cfg)
    : inner_(std::move(inner)), cfg_(cfg) {
  cfg_.validate();
  workers_.reserve(cfg_.max_inflight);
  for (int i = 0; i < cfg_.max_inflight; ++i) {
    workers_.emplace_back([this] { worker_loop(); });
  }
}

BatchingValue::~BatchingValue() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& w : workers_) w.join();
}

std::vector<double> BatchingValue::score(const std::vector<State>& states) {
  if (states.empty()) return {};
  std::future<std::vector<double>> fut;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) throw BackendFailure("batching backend is shutting down", 0, 0);
    counters_.requests += 1;
    queue_.push_back(Pending{&states, {}, std::chrono::steady_clock::now()});
    fut = queue_.back().promise.get_future();
  }
  cv_.notify_one();
  return fut.get();
}

void BatchingValue::worker_loop() {
  for (;;) {
    std::vector<Pending> batch;
    std::size_t total_states = 0;
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) {
        if (stopping_) return;
        continue;
      }
      const auto deadline = queue_.front().enqueued +
                            std::chrono::milliseconds(cfg_.queue_timeout_ms);
      // wait for more work until the oldest request ages out or we can fill
      // a batch; re-check on every wakeup
      while (!stopping_ && std::chrono::steady_clock::now() < deadline) {
        std::size_t queued = 0;
        for (const Pending& p : queue_) queued += p.states->size();
        if (queued >= static_cast<std::size_t>(cfg_.max_batch)) break;
        if (cv_.wait_until(lock, deadline) == std::cv_status::timeout) break;
        if (queue_.empty()) break;
      }
      if (queue_.empty()) continue;
      while (!queue_.empty()) {
        const std::size_t next = queue_.front().states->size();
        if (!batch.empty() && total_states + next > static_cast<std::size_t>(cfg_.max_batch)) {
          break;
        }
        total_states += next;
        batch.push_back(std::move(queue_.front()));
        queue_.pop_front();
        if (total_states >= static_cast<std::size_t>(cfg_.max_batch)) break;
      }
      counters_.batches += 1;
      if (batch.size() > 1) counters_.coalesced += 1;
      counters_.max_batch_states = std::max<std::uint64_t>(counters_.max_batch_states,
                                                           total_states);
    }

    std::vector<State> merged;
    merged.reserve(total_states);
    for (const Pending& p : batch) {
      merged.insert(merged.end(), p.states->begin(), p.states->end());
    }
    try {
      const std::vector<double> scores = inner_->score(merged);
      if (scores.size() != merged.size()) {
        throw MalformedResponse("inner value backend misaligned the batch");
      }
      std::size_t offset = 0;
      for (Pending& p : batch) {
        std::vector<double> part(scores.begin() + offset,
                                 scores.begin() + offset + p.states->size());
        offset += p.states->size();
        p.promise.set_value(std::move(part));
      }
    } catch (...) {
      for (Pending& p : batch) p.promise.set_exception(std::current_exception());
    }
  }
}

BatchCounters BatchingValue::counters() const {
  std::lock_guard<std::mutex> lock(mu_);
  return counters_;
}

BatchingPolicy::BatchingPolicy(std::shared_ptr<PolicyBackend> inner, BatchingConfig cfg)
    : inner_(std::move(inner)), cfg_(cfg) {
  cfg_.validate();
  workers_.reserve(cfg_.max_inflight);
  for (int i = 0; i < cfg_.max_inflight; ++i) {
    workers_.emplace_back([this] { worker_loop(); });
  }
}

BatchingPolicy::~BatchingPolicy() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& w : workers_) w.join();
}

std::vector<ReasoningStep> BatchingPolicy::generate(const State& state, int m,
                                                    const DiversityParams& params) {
  std::vector<State> one{state};
  return generate_batch(one, m, params).front();
}

std::vector<std::vector<ReasoningStep>> BatchingPolicy::generate_batch(
    const std::vector<State>& states, int m, const DiversityParams& params) {
  if (states.empty()) return {};
  std::future<std::vector<std::vector<ReasoningStep>>> fut;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) throw BackendFailure("batching backend is shutting down", 0, 0);
    counters_.requests += 1;
    queue_.push_back(Pending{&states, m, params, {}, std::chrono::steady_clock::now()});
    fut = queue_.back().promise.get_future();
  }
  cv_.notify_one();
  return fut.get();
}

void BatchingPolicy::worker_loop() {
  const auto same_key = [](const Pending& a, const Pending& b) {
    return a.m == b.m && a.params.temperature == b.params.temperature &&
           a.params.distinct == b.params.distinct;
  };
  for (;;) {
    std::vector<Pending> batch;
    std::size_t total_states = 0;
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) {
        if (stopping_) return;
        continue;
      }
      const auto deadline = queue_.front().enqueued +
                            std::chrono::milliseconds(cfg_.queue_timeout_ms);
      while (!stopping_ && std::chrono::steady_clock::now() < deadline) {
        std::size_t queued = 0;
        for (const Pending& p : queue_) {
          if (same_key(p, queue_.front())) queued += p.states->size();
        }
        if (queued >= static_cast<std::size_t>(cfg_.max_batch)) break;
        if (cv_.wait_until(lock, deadline) == std::cv_status::timeout) break;
        if (queue_.empty()) break;
      }
      if (queue_.empty()) continue;
      // gather queue entries with the head's parameters, preserving order
      const Pending& head = queue_.front();
      for (auto it = queue_.begin(); it != queue_.end();) {
        if (!same_key(*it, head)) {
          ++it;
          continue;
        }
        const std::size_t next = (*it).states->size();
        if (!batch.empty() && total_states + next > static_cast<std::size_t>(cfg_.max_batch)) {
          break;
        }
        total_states += next;
        batch.push_back(std::move(*it));
        it = queue_.erase(it);
        if (total_states >= static_cast<std::size_t>(cfg_.max_batch)) break;
      }
      counters_.batches += 1;
      if (batch.size() > 1) counters_.coalesced += 1;
      counters_.max_batch_states = std::max<std::uint64_t>(counters_.max_batch_states,
                                                           total_states);
    }

    std::vector<State> merged;
    merged.reserve(total_states);
    for (const Pending& p : batch) {
      merged.insert(merged.end(), p.states->begin(), p.states->end());
    }
    try {
      auto cands = inner_->generate_batch(merged, batch.front().m, batch.front().params);
      if (cands.size() != merged.size()) {
        throw MalformedResponse("inner policy backend misaligned the batch");
      }
      std::size_t offset = 0;
      for (Pending& p : batch) {
        std::vector<std::vector<ReasoningStep>> part(
            std::make_move_iterator(cands.begin() + offset),
            std::make_move_iterator(cands.begin() + offset + p.states->size()));
        offset += p.states->size();
        p.promise.set_value(std::move(part));
      }
    } catch (...) {
      for (Pending& p : batch) p.promise.set_exception(std::current_exception());
    }
  }
}

BatchCounters BatchingPolicy::counters() const {
  std::lock_guard<std::mutex> lock(mu_);
  return counters_;
}

}  // namespace rlm
