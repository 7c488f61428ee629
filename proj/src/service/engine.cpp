#include "rlm/service/engine.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rlm/backends/remote.hpp"
#include "rlm/backends/synthetic.hpp"
#include "rlm/core/serialize.hpp"
#include "rlm/util/rng.hpp"

namespace rlm {

using nlohmann::json;
using nlohmann::ordered_json;

void EngineConfig::validate() const {
  search.validate();
  batching.validate();
  if (policy.kind != "synthetic" && policy.kind != "remote") {
    throw InvalidConfig("policy kind must be synthetic or remote");
  }
  if (policy.kind == "remote" && policy.url.empty()) {
    throw InvalidConfig("remote policy requires a url");
  }
  if (value.kind != "oracle" && value.kind != "random" && value.kind != "remote") {
    throw InvalidConfig("value kind must be oracle, random or remote");
  }
  if (value.kind == "remote" && value.url.empty()) {
    throw InvalidConfig("remote value requires a url");
  }
  if (value.kind == "oracle" && value.scheme != "binary" && value.scheme != "continuous") {
    throw InvalidConfig("oracle scheme must be binary or continuous");
  }
}

namespace {

RetryPolicy retry_from_json(const json& j) {
  RetryPolicy r;
  r.max_attempts = j.value("max_attempts", r.max_attempts);
  r.initial_backoff_ms = j.value("initial_backoff_ms", r.initial_backoff_ms);
  r.backoff_multiplier = j.value("backoff_multiplier", r.backoff_multiplier);
  return r;
}

ordered_json retry_to_json(const RetryPolicy& r) {
  return ordered_json{{"max_attempts", r.max_attempts},
                      {"initial_backoff_ms", r.initial_backoff_ms},
                      {"backoff_multiplier", r.backoff_multiplier}};
}

}  // namespace

EngineConfig engine_config_from_json(const json& j) {
  EngineConfig cfg;
  if (j.contains("search")) cfg.search = config_from_json(j.at("search"));
  if (j.contains("policy")) {
    const json& p = j.at("policy");
    cfg.policy.kind = p.value("kind", cfg.policy.kind);
    cfg.policy.url = p.value("url", cfg.policy.url);
    cfg.policy.temperature = p.value("temperature", cfg.policy.temperature);
    cfg.policy.seed = p.value("seed", cfg.policy.seed);
    if (p.contains("retry")) cfg.policy.retry = retry_from_json(p.at("retry"));
  }
  if (j.contains("value")) {
    const json& v = j.at("value");
    cfg.value.kind = v.value("kind", cfg.value.kind);
    cfg.value.url = v.value("url", cfg.value.url);
    cfg.value.scheme = v.value("scheme", cfg.value.scheme);
    if (v.contains("gamma")) cfg.value.gamma = v.at("gamma").get<double>();
    cfg.value.seed = v.value("seed", cfg.value.seed);
    if (v.contains("retry")) cfg.value.retry = retry_from_json(v.at("retry"));
  }
  if (j.contains("batching")) {
    const json& b = j.at("batching");
    cfg.batching.max_batch = b.value("max_batch", cfg.batching.max_batch);
    cfg.batching.max_inflight = b.value("max_inflight", cfg.batching.max_inflight);
    cfg.batching.queue_timeout_ms = b.value("queue_timeout_ms", cfg.batching.queue_timeout_ms);
    cfg.batching.enabled = b.value("enabled", cfg.batching.enabled);
  }
  cfg.persist_dir = j.value("persist_dir", cfg.persist_dir);
  cfg.validate();
  return cfg;
}

ordered_json engine_config_to_json(const EngineConfig& cfg) {
  ordered_json policy{{"kind", cfg.policy.kind},
                      {"temperature", cfg.policy.temperature},
                      {"seed", cfg.policy.seed}};
  if (!cfg.policy.url.empty()) policy["url"] = cfg.policy.url;
  policy["retry"] = retry_to_json(cfg.policy.retry);

  ordered_json value{{"kind", cfg.value.kind}, {"seed", cfg.value.seed}};
  if (!cfg.value.url.empty()) value["url"] = cfg.value.url;
  if (cfg.value.kind == "oracle") value["scheme"] = cfg.value.scheme;
  if (cfg.value.gamma) value["gamma"] = *cfg.value.gamma;
  value["retry"] = retry_to_json(cfg.value.retry);

  return ordered_json{{"search", config_to_json(cfg.search)},
                      {"policy", policy},
                      {"value", value},
                      {"batching",
                       ordered_json{{"max_batch", cfg.batching.max_batch},
                                    {"max_inflight", cfg.batching.max_inflight},
                                    {"queue_timeout_ms", cfg.batching.queue_timeout_ms},
                                    {"enabled", cfg.batching.enabled}}},
                      {"persist_dir", cfg.persist_dir}};
}

EngineConfig load_engine_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidConfig("config file " + path + " is not valid JSON: " + e.what());
  }
  return engine_config_from_json(j);
}

EngineBackends build_backends(const EngineConfig& cfg) {
  cfg.validate();
  EngineBackends out;
  out.diversity = DiversityParams{cfg.policy.temperature, true};
  out.verifier = std::make_shared<SumGameVerifier>();

  std::shared_ptr<PolicyBackend> policy;
  if (cfg.policy.kind == "synthetic") {
    policy = std::make_shared<SyntheticPolicy>(cfg.policy.seed);
  } else {
    policy = std::make_shared<RemotePolicy>(RemoteOptions{cfg.policy.url, cfg.policy.retry});
  }

  std::shared_ptr<ValueBackend> value;
  const double gamma = cfg.value.gamma.value_or(cfg.search.discount);
  if (cfg.value.kind == "oracle") {
    value = std::make_shared<OracleValue>(gamma, cfg.value.scheme == "binary"
                                                     ? ValueScheme::kBinaryLikelihood
                                                     : ValueScheme::kContinuousDiscounted);
  } else if (cfg.value.kind == "random") {
    value = std::make_shared<RandomValue>(cfg.value.seed);
  } else {
    value = std::make_shared<RemoteValue>(RemoteOptions{cfg.value.url, cfg.value.retry});
  }

  if (cfg.batching.enabled) {
    out.policy_batcher = std::make_shared<BatchingPolicy>(policy, cfg.batching);
    out.value_batcher = std::make_shared<BatchingValue>(value, cfg.batching);
    out.policy = out.policy_batcher;
    out.value = out.value_batcher;
  } else {
    out.policy = policy;
    out.value = value;
  }
  return out;
}

std::string solve_tree_id(const SearchConfig& effective, const std::string& question) {
  const std::string canonical = config_to_json(effective).dump() + "\x1f" + question;
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(canonical);
  return os.str();
}

void persist_tree(const std::string& dir, const std::string& tree_id, const SearchTree& tree,
                  const SearchConfig& cfg) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = std::filesystem::path(dir) / (tree_id + ".json");
  std::ofstream out(path);
  if (!out) throw Error("cannot write tree file " + path.string());
  out << tree_to_string(tree, cfg);
}

SolveResult solve_question(const EngineConfig& cfg, EngineBackends& backends,
                           const std::string& question,
                           const std::optional<std::string>& golden,
                           const std::optional<SearchConfig>& override_cfg) {
  SearchConfig effective = override_cfg.value_or(cfg.search);
  effective.validate();
  if (question.empty()) throw InvalidConfig("question must be non-empty");

  SolveResult result{
      run_mcts(question, effective, *backends.policy, *backends.value,
               golden ? backends.verifier.get() : nullptr, golden ? &*golden : nullptr,
               backends.diversity),
      solve_tree_id(effective, question), effective};
  if (!cfg.persist_dir.empty()) {
    persist_tree(cfg.persist_dir, result.tree_id, result.outcome.tree, effective);
  }
  return result;
}

}  // namespace rlm
