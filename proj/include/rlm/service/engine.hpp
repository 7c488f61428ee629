#ifndef RLM_SERVICE_ENGINE_HPP_
#define RLM_SERVICE_ENGINE_HPP_

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "rlm/backends/backend.hpp"
#include "rlm/search/mcts.hpp"
#include "rlm/service/batching.hpp"

namespace rlm {

struct PolicySourceConfig {
  std::string kind = "synthetic";  // synthetic | remote
  std::string url;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  RetryPolicy retry;
};

struct ValueSourceConfig {
  std::string kind = "oracle";  // oracle | random | remote
  std::string url;
  std::string scheme = "continuous";  // binary | continuous (oracle only)
  std::optional<double> gamma;        // defaults to search.discount
  std::uint64_t seed = 0;
  RetryPolicy retry;
};

struct EngineConfig {
  SearchConfig search;
  PolicySourceConfig policy;
  ValueSourceConfig value;
  BatchingConfig batching;
  std::string persist_dir = "trees";

  void validate() const;
};

EngineConfig engine_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json engine_config_to_json(const EngineConfig& cfg);
EngineConfig load_engine_config(const std::string& path);

/// Constructed backend set; policy/value are batching wrappers when
/// batching is enabled.
struct EngineBackends {
  std::shared_ptr<PolicyBackend> policy;
  std::shared_ptr<ValueBackend> value;
  std::shared_ptr<Verifier> verifier;
  DiversityParams diversity;
  std::shared_ptr<BatchingPolicy> policy_batcher;  // null when batching disabled
  std::shared_ptr<BatchingValue> value_batcher;    // null when batching disabled
};

EngineBackends build_backends(const EngineConfig& cfg);

/// Content-addressed run id: hash of the effective config (seed included)
/// and the question.
std::string solve_tree_id(const SearchConfig& effective, const std::string& question);

struct SolveResult {
  MctsOutcome outcome;
  std::string tree_id;
  SearchConfig effective;
};

/// Runs one solve; persists the tree under persist_dir when set.
SolveResult solve_question(const EngineConfig& cfg, EngineBackends& backends,
                           const std::string& question,
                           const std::optional<std::string>& golden = std::nullopt,
                           const std::optional<SearchConfig>& override_cfg = std::nullopt);

void persist_tree(const std::string& dir, const std::string& tree_id, const SearchTree& tree,
                  const SearchConfig& cfg);

}  // namespace rlm

#endif  // RLM_SERVICE_ENGINE_HPP_
