// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits non-zero if any fail.
// argv[1] (optional): path to the CLI binary, used by the determinism check.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "rlm/backends/synthetic.hpp"
#include "rlm/core/serialize.hpp"
#include "rlm/labeling/labels.hpp"
#include "rlm/labeling/sft.hpp"
#include "rlm/losses/losses.hpp"
#include "rlm/metrics/ci.hpp"
#include "rlm/metrics/distribution.hpp"
#include "rlm/pipeline/advantage.hpp"
#include "rlm/pipeline/rollout.hpp"
#include "rlm/search/mcts.hpp"
#include "rlm/search/transform.hpp"
#include "rlm/service/engine.hpp"
#include "rlm/service/http.hpp"
#include "support/oracles.hpp"
#include "support/stub_server.hpp"

using namespace rlm;

namespace {

std::string g_cli_path;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

State root_state(const SyntheticEnv& env) {
  return State(ReasoningStep{env.question(), StepMarker::kIntermediate});
}

std::filesystem::path fresh_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("rlm_acceptance_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------- criterion 1
// Monte-Carlo value labels against the brute-force oracle.
bool criterion_oracle_equivalence(Check& check) {
  SyntheticEnv env;
  env.increments = {1, 2, 3};
  env.depth = 4;
  env.target = 8;
  SumGameVerifier verifier;

  std::vector<State> states = enumerate_states(env, false);
  if (states.size() > 100) states.erase(states.begin() + 100, states.end());

  std::atomic<int> within_bound{0};
  std::atomic<int> affine_exact{0};
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    SyntheticPolicy policy(env, 0);
    for (std::size_t i = next.fetch_add(1); i < states.size(); i = next.fetch_add(1)) {
      SimulationParams params;
      params.n = 10000;
      params.seed = 1000 + i;
      params.max_depth = 16;
      const MonteCarloLabels labels =
          monte_carlo_labels(states[i], policy, verifier, env.golden(), params);
      const double oracle =
          oracle_value(env, states[i], 1.0, ValueScheme::kBinaryLikelihood);
      const double bound = 3.0 * std::sqrt(oracle * (1.0 - oracle) / params.n);
      if (std::abs(labels.binary.value - oracle) <= bound) within_bound.fetch_add(1);
      if (labels.continuous.value == 2.0 * labels.binary.value - 1.0) {
        affine_exact.fetch_add(1);
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_threads = std::max(2u, std::thread::hardware_concurrency());
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  check.detail << within_bound.load() << "/" << states.size() << " labels within 3-sigma, "
               << affine_exact.load() << " affine-exact";
  check.require(within_bound.load() >= 99, "fewer than 99/100 labels within the bound");
  check.require(affine_exact.load() == static_cast<int>(states.size()),
                "continuous label deviated from 2*binary-1 at gamma=1");
  return check.ok;
}

// ---------------------------------------------------------------- criterion 2
// Backpropagated q values equal an independent bottom-up recomputation.
bool criterion_backprop(Check& check) {
  std::mt19937_64 rng(7);
  int trees_checked = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    SearchTree tree = rlm::testing::random_terminal_tree(rng, 100);
    if (tree.size() < 3) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (NodeId leaf : tree.leaves()) {
        tree.stats(leaf).visits += 1;
        backpropagate(tree, leaf, 1.0, 1.0);
      }
    }
    const std::vector<double> expected = rlm::testing::bottom_up_q(tree, 1.0);
    for (NodeId id = 0; id < tree.size(); ++id) {
      if (tree.is_leaf(id)) continue;
      worst = std::max(worst, std::abs(tree.stats(id).q - expected[id]));
    }
    trees_checked += 1;
  }
  check.detail << trees_checked << " trees, max |engine - recomputed| = " << worst;
  check.require(trees_checked >= 190, "not enough non-trivial random trees");
  check.require(worst <= 1e-9, "bottom-up recomputation disagreed beyond 1e-9");
  return check.ok;
}

// ---------------------------------------------------------------- criterion 3
// PUCT: hand-computed scores and exact round-robin under equal q.
bool criterion_puct(Check& check) {
  NodeStats parent;
  parent.visits = 10;
  NodeStats c1;
  c1.visits = 3;
  c1.q = 0.5;
  NodeStats c2;
  c2.visits = 1;
  c2.q = 0.2;
  check.require(std::abs(puct_score(parent, c1, 1.25, 19652.0) - 1.437881543478748) <= 1e-9,
                "hand-computed score 1 off");
  check.require(std::abs(puct_score(parent, c2, 1.25, 19652.0) - 2.075763086957497) <= 1e-9,
                "hand-computed score 2 off");

  SearchTree tree(State(ReasoningStep{"q", StepMarker::kIntermediate}));
  std::vector<NodeId> kids;
  for (int i = 0; i < 5; ++i) {
    kids.push_back(tree.add_child(
        tree.root(), ReasoningStep{"k" + std::to_string(i), StepMarker::kIntermediate}, 0.4,
        false));
  }
  tree.stats(tree.root()).visits = 5;
  std::mt19937_64 rng(123);
  int violations = 0;
  for (int step = 0; step < 1000; ++step) {
    const NodeId picked = select_leaf(tree, 1.25, 19652.0, rng);
    std::uint32_t min_visits = UINT32_MAX;
    for (NodeId k : kids) min_visits = std::min(min_visits, tree.stats(k).visits);
    if (tree.stats(picked).visits != min_visits) violations += 1;
    tree.stats(picked).visits += 1;
    tree.stats(tree.root()).visits += 1;
  }
  check.detail << "1000 selection steps, " << violations << " round-robin violations";
  check.require(violations == 0, "selection left the min-visit set");
  return check.ok;
}

// ---------------------------------------------------------------- criterion 4
// End-to-end solve rate with the oracle value backend; random backend lower.
bool criterion_solve_rate(Check& check) {
  SyntheticEnv env;
  env.increments = {1, 2, 3};
  env.depth = 3;
  env.target = 9;  // unique correct terminal
  SumGameVerifier verifier;

  SearchConfig cfg;
  cfg.iterations = 32;
  cfg.children_per_expansion = 3;
  cfg.max_depth = 8;

  auto run_with = [&](ValueBackend& value, std::uint64_t seed) {
    SearchConfig run_cfg = cfg;
    run_cfg.seed = seed;
    SyntheticPolicy policy(env, seed);
    const MctsOutcome out = run_mcts(env.question(), run_cfg, policy, value);
    return out.best_path && out.best_path->terminal &&
           verifier.check(out.best_path->states.back(), env.golden());
  };

  int oracle_solved = 0;
  int random_solved = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    OracleValue oracle(env, cfg.discount, ValueScheme::kContinuousDiscounted);
    RandomValue noise(seed * 31 + 7);
    if (run_with(oracle, seed)) oracle_solved += 1;
    if (run_with(noise, seed)) random_solved += 1;
  }
  check.detail << "oracle " << oracle_solved << "/100, random " << random_solved << "/100";
  check.require(oracle_solved >= 95, "oracle-guided solve rate below 95/100");
  check.require(random_solved < oracle_solved, "no separation from the random backend");
  return check.ok;
}

// ---------------------------------------------------------------- criterion 5
// Advantage math on gamma-consistent and random chains.
bool criterion_advantages(Check& check) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(2, 12);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  auto chain_tree = [](const std::vector<double>& q, double reward) {
    SearchTree tree(State(ReasoningStep{"q", StepMarker::kIntermediate}));
    tree.stats(tree.root()).q = q.front();
    NodeId cur = tree.root();
    for (std::size_t i = 1; i + 1 < q.size(); ++i) {
      cur = tree.add_child(
          cur, ReasoningStep{"z" + std::to_string(i), StepMarker::kIntermediate}, q[i],
          false);
    }
    return std::make_pair(
        tree.add_child(cur, ReasoningStep{"answer", StepMarker::kFinal}, q.back(), true,
                       reward),
        std::move(tree));
  };

  double worst_consistent = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double gamma = coin(rng) ? 1.0 : 0.95;
    const double reward = coin(rng) ? 1.0 : -1.0;
    const int n = len(rng);
    std::vector<double> q(n);
    q[n - 1] = reward;
    for (int i = n - 2; i >= 0; --i) q[i] = gamma * q[i + 1];
    auto [term, tree] = chain_tree(q, reward);
    (void)term;
    const auto recs = compute_advantages(tree, {gamma, false});
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
      worst_consistent = std::max(worst_consistent, std::abs(recs[i].advantage));
    }
  }
  check.require(worst_consistent <= 1e-12,
                "gamma-consistent chain advantage exceeded 1e-12");

  double worst_telescope = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = len(rng);
    const double reward = coin(rng) ? 1.0 : -1.0;
    std::vector<double> q(n);
    for (auto& v : q) v = unit(rng);
    q[n - 1] = reward;
    auto [term, tree] = chain_tree(q, reward);
    (void)term;
    double sum = 0.0;
    for (const auto& r : compute_advantages(tree, {1.0, false})) sum += r.advantage;
    worst_telescope = std::max(worst_telescope, std::abs(sum - (reward + q[n - 1] - q[0])));
  }
  check.detail << "max consistent-chain |A| = " << worst_consistent
               << ", max telescoping residual = " << worst_telescope;
  check.require(worst_telescope <= 1e-9, "telescoping identity violated beyond 1e-9");
  return check.ok;
}

// ---------------------------------------------------------------- criterion 6
// q targets equal gamma times the child-started value, both enumerated.
bool criterion_qv_equivalence(Check& check) {
  int states_checked = 0;
  double worst_dual = 0.0;
  for (int branching : {2, 3}) {
    SyntheticEnv env;
    env.increments.clear();
    for (int k = 1; k <= branching; ++k) env.increments.push_back(k);
    env.depth = 3;
    env.target = 2 * env.depth;
    for (double gamma : {1.0, 0.95}) {
      for (const State& child : enumerate_states(env, true)) {
        if (child.depth() == 0) continue;
        double target;
        double v_child;
        if (child.terminal()) {
          v_child = extract_answer(child) == env.golden() ? 1.0 : -1.0;
          target = q_label(child, v_child, gamma).target;
          if (target != v_child) {
            check.require(false, "terminal q target is not the reward");
          }
        } else {
          v_child = oracle_value(env, child, gamma, ValueScheme::kContinuousDiscounted);
          target = q_label(child, v_child, gamma).target;
          if (target != gamma * v_child) {
            check.require(false, "non-terminal q target is not gamma * value, exactly");
          }
        }
        // independent route: explicit trajectory enumeration from the parent
        const double enumerated = rlm::testing::enumerated_q(env, child, gamma);
        const double reference = child.terminal() ? target : gamma * v_child;
        worst_dual = std::max(worst_dual, std::abs(reference - enumerated));
        states_checked += 1;
      }
    }
  }
  check.detail << states_checked << " transitions, max dual-route gap = " << worst_dual;
  check.require(worst_dual <= 1e-12, "independent enumeration disagreed beyond 1e-12");
  return check.ok;
}

// ---------------------------------------------------------------- criterion 7
// Loss hand values and the clipping property.
bool criterion_losses(Check& check) {
  namespace L = rlm::losses;
  const double ln2 = std::log(2.0);
  check.require(std::abs(L::ppo_clip_objective(1.5, 1.0, 0.2) - 1.2) <= 1e-6,
                "ppo clip up");
  check.require(std::abs(L::ppo_clip_objective(0.5, -1.0, 0.2) + 0.8) <= 1e-6,
                "ppo clip down");
  check.require(std::abs(L::dpo_objective(0.0, 0.0, 1.0) + 0.6931) <= 1e-4,
                "log sigmoid at zero");
  check.require(std::abs(L::dpo_objective(0.0, 0.0, 1.0) + ln2) <= 1e-6,
                "log sigmoid at zero (tight)");
  check.require(
      std::abs(L::completion_ce({std::log(0.5), std::log(0.5)}) - 2.0 * ln2) <= 1e-6,
      "completion cross entropy");
  check.require(std::abs(L::bce(0.5, 1) - ln2) <= 1e-6, "bce hand value");

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ratio(0.001, 8.0);
  std::uniform_real_distribution<double> adv(-10.0, 10.0);
  std::uniform_real_distribution<double> eps(0.01, 0.99);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double r = ratio(rng);
    const double a = adv(rng);
    const double e = eps(rng);
    if (L::ppo_clip_objective(r, a, e) > r * a + 1e-15) violations += 1;
  }
  check.detail << "10000 clip triples, " << violations << " violations";
  check.require(violations == 0, "clipping increased the objective");
  return check.ok;
}

// ---------------------------------------------------------------- criterion 8
// Metric hand cases and the CI-length curve shape.
bool criterion_metrics(Check& check) {
  namespace M = rlm::metrics;
  check.require(std::abs(M::entropy_bits({{0.25, 0.25, 0.25, 0.25}}) - 2.0) <= 1e-9,
                "entropy uniform-4");
  check.require(std::abs(M::entropy_bits({{0.5, 0.25, 0.25}}) - 1.5) <= 1e-9,
                "entropy skewed");
  check.require(std::abs(M::varentropy({{0.5, 0.25, 0.25}}) - 0.25) <= 1e-9, "varentropy");
  check.require(std::abs(M::gini({{1.0, 0.0}}) - 0.5) <= 1e-9, "gini one-hot 2");
  check.require(std::abs(M::gini({{1.0, 0.0, 0.0, 0.0}}) - 0.75) <= 1e-9, "gini one-hot 4");
  check.require(std::abs(M::prob_variance({{1.0, 0.0}}) - 0.25) <= 1e-9, "variance");

  const std::vector<int> sizes{50, 100, 200, 500};
  int endpoint_ok = 0;
  int decreases = 0;
  int comparisons = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto matrix = CorrectnessMatrix::bernoulli(1000, 8, 0.5, seed);
    const auto curve = M::ci_length_curve(matrix, sizes, 32, seed);
    if (curve.back().second < curve.front().second) endpoint_ok += 1;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
      comparisons += 1;
      if (curve[i + 1].second <= curve[i].second) decreases += 1;
    }
  }
  // one-sided sign test: P(X >= k | n, p=0.5) < 0.05
  double tail = 0.0;
  for (int k = decreases; k <= comparisons; ++k) {
    double logc = std::lgamma(comparisons + 1) - std::lgamma(k + 1) -
                  std::lgamma(comparisons - k + 1);
    tail += std::exp(logc - comparisons * std::log(2.0));
  }
  check.detail << "size-500 < size-50 in " << endpoint_ok << "/10 seeds; " << decreases << "/"
               << comparisons << " adjacent decreases (sign-test p = " << tail << ")";
  check.require(endpoint_ok == 10, "CI length did not shrink from 50 to 500 in every seed");
  check.require(tail < 0.05, "sign test failed to reject the flat-curve null");
  return check.ok;
}

// ---------------------------------------------------------------- criterion 9
// SFT target grammar and split/build round trip.
bool criterion_sft_grammar(Check& check) {
  const SftMarkers markers;
  std::mt19937_64 rng(2025);
  std::uniform_int_distribution<int> n_steps(1, 8);
  std::uniform_int_distribution<int> n_words(1, 6);
  const std::vector<std::string> words{"expand", "(x+1)^2", "so", "x=3", "check:", "7/2",
                                       "thus", "proof", "therefore 42"};
  int well_formed = 0;
  int round_trips = 0;
  const int total = 1000;
  for (int i = 0; i < total; ++i) {
    std::vector<ReasoningStep> steps;
    const int k = n_steps(rng);
    for (int s = 0; s < k; ++s) {
      std::string text;
      const int w = n_words(rng);
      for (int j = 0; j < w; ++j) {
        if (j) text += ' ';
        text += words[rng() % words.size()];
      }
      steps.push_back(
          ReasoningStep{text, s + 1 == k ? StepMarker::kFinal : StepMarker::kIntermediate});
    }
    const std::string target = sft_target(steps, markers);
    if (sft_target_well_formed(target, markers)) well_formed += 1;
    const auto texts = split_sft_target(target, markers);
    bool same = texts.size() == steps.size();
    for (std::size_t j = 0; same && j < texts.size(); ++j) same = texts[j] == steps[j].text;

    // and the cot splitter recovers step lists from raw completions
    std::string completion;
    for (std::size_t j = 0; j < steps.size(); ++j) {
      if (j) completion += "\n\n";
      completion += steps[j].text;
    }
    const auto resplit = split_cot_to_steps(completion);
    same = same && resplit.size() == steps.size();
    for (std::size_t j = 0; same && j < resplit.size(); ++j) {
      same = resplit[j].text == steps[j].text && resplit[j].marker == steps[j].marker;
    }
    if (same) round_trips += 1;
  }
  check.detail << well_formed << "/" << total << " targets well-formed, " << round_trips
               << "/" << total << " exact round trips";
  check.require(well_formed == total, "a generated target failed the grammar");
  check.require(round_trips == total, "a split/build round trip diverged");
  return check.ok;
}

// --------------------------------------------------------------- criterion 10
// Determinism and persistence, including HTTP/CLI agreement.
bool criterion_determinism(Check& check) {
  const auto dir = fresh_dir("determinism");
  SyntheticEnv env;
  env.increments = {1, 2, 3};
  env.depth = 3;
  env.target = 7;

  EngineConfig cfg;
  cfg.search.iterations = 24;
  cfg.search.max_depth = 8;
  cfg.search.seed = 4242;
  cfg.persist_dir = (dir / "a").string();

  // same seed, byte-identical persisted tree
  EngineBackends b1 = build_backends(cfg);
  const SolveResult r1 = solve_question(cfg, b1, env.question());
  EngineConfig cfg2 = cfg;
  cfg2.persist_dir = (dir / "b").string();
  EngineBackends b2 = build_backends(cfg2);
  const SolveResult r2 = solve_question(cfg2, b2, env.question());
  const std::string first = tree_to_string(r1.outcome.tree, r1.effective);
  const std::string second = tree_to_string(r2.outcome.tree, r2.effective);
  check.require(first == second, "same seed produced different tree bytes");
  check.require(r1.tree_id == r2.tree_id, "content-addressed ids diverged");

  // load -> save is value-stable
  auto [loaded, loaded_cfg] = tree_from_string(first);
  check.require(tree_to_string(loaded, loaded_cfg) == first, "load/save not byte-stable");
  for (NodeId id = 0; id < loaded.size(); ++id) {
    const double a = loaded.stats(id).q;
    const double b = r1.outcome.tree.stats(id).q;
    const double rel = std::abs(a - b) / std::max(1.0, std::abs(b));
    if (rel > 1e-12) {
      check.require(false, "q drifted past 1e-12 through persistence");
      break;
    }
  }

  // HTTP and CLI agree byte-for-byte
  if (g_cli_path.empty()) {
    check.require(false, "cli path not provided to the acceptance binary");
    return check.ok;
  }
  EngineConfig svc_cfg = cfg;
  svc_cfg.persist_dir = (dir / "http").string();
  EngineService service(svc_cfg);
  service.start("127.0.0.1", 0);
  httplib::Client client("http://127.0.0.1:" + std::to_string(service.port()));
  const nlohmann::json body{{"question", env.question()}};
  const auto res = client.Post("/v1/solve", body.dump(), "application/json");
  service.stop();
  check.require(res && res->status == 200, "http solve failed");
  if (!check.ok) return false;
  const std::string tree_id = nlohmann::json::parse(res->body).at("tree_ref");

  EngineConfig cli_cfg = cfg;
  cli_cfg.persist_dir.clear();  // CLI writes --out instead
  const auto cfg_path = dir / "config.json";
  {
    std::ofstream out(cfg_path);
    out << engine_config_to_json(cli_cfg).dump(2) << "\n";
  }
  const auto cli_out = dir / "cli_tree.json";
  const std::string cmd = "'" + g_cli_path + "' solve --question '" + env.question() +
                          "' --config '" + cfg_path.string() + "' --out '" +
                          cli_out.string() + "' > /dev/null";
  const int rc = std::system(cmd.c_str());
  check.require(rc == 0, "cli solve exited non-zero");

  std::ifstream http_file((dir / "http") / (tree_id + ".json"));
  std::ifstream cli_file(cli_out);
  const std::string http_bytes((std::istreambuf_iterator<char>(http_file)),
                               std::istreambuf_iterator<char>());
  const std::string cli_bytes((std::istreambuf_iterator<char>(cli_file)),
                              std::istreambuf_iterator<char>());
  check.require(!http_bytes.empty(), "http-persisted tree missing");
  check.require(http_bytes == cli_bytes, "http and cli trees differ");
  check.detail << "tree " << tree_id << ", " << http_bytes.size() << " bytes via both paths";
  return check.ok;
}

// --------------------------------------------------------------- criterion 11
// Concurrent solves through the service coalesce backend batches without
// misaligning responses.
bool criterion_service_batching(Check& check) {
  rlm::testing::StubBackendServer stub;
  stub.start();
  const auto dir = fresh_dir("batching");

  EngineConfig cfg;
  cfg.search.iterations = 64;
  cfg.search.max_depth = 8;
  cfg.search.seed = 7;
  cfg.policy.kind = "remote";
  cfg.policy.url = stub.url();
  cfg.value.kind = "remote";
  cfg.value.url = stub.url();
  cfg.batching.max_batch = 8;
  cfg.batching.max_inflight = 4;
  cfg.batching.queue_timeout_ms = 10;
  cfg.persist_dir = (dir / "trees").string();

  EngineService service(cfg);
  service.start("127.0.0.1", 0);

  // 16 distinct, solvable questions: depth 3 reaches sums 3..9, depth 4
  // reaches 4..12
  std::vector<SyntheticEnv> envs;
  for (int target = 3; target <= 9; ++target) {
    SyntheticEnv env;
    env.increments = {1, 2, 3};
    env.depth = 3;
    env.target = target;
    envs.push_back(env);
  }
  for (int target = 4; target <= 12; ++target) {
    SyntheticEnv env;
    env.increments = {1, 2, 3};
    env.depth = 4;
    env.target = target;
    envs.push_back(env);
  }

  std::vector<std::string> answers(envs.size());
  std::vector<int> statuses(envs.size(), 0);
  std::vector<std::string> tree_ids(envs.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < envs.size(); ++i) {
    threads.emplace_back([&, i] {
      httplib::Client client("http://127.0.0.1:" + std::to_string(service.port()));
      client.set_read_timeout(60, 0);
      const nlohmann::json body{{"question", envs[i].question()}};
      const auto res = client.Post("/v1/solve", body.dump(), "application/json");
      if (!res) return;
      statuses[i] = res->status;
      if (res->status != 200) return;
      const auto reply = nlohmann::json::parse(res->body);
      const auto steps = reply.at("best_path");
      answers[i] = steps.back().at("text").get<std::string>();
      tree_ids[i] = reply.at("tree_ref").get<std::string>();
    });
  }
  for (auto& t : threads) t.join();
  service.stop();

  int correct = 0;
  for (std::size_t i = 0; i < envs.size(); ++i) {
    if (statuses[i] == 200 && answers[i] == "answer = " + envs[i].golden()) correct += 1;
  }

  std::size_t multi_state_batches = 0;
  std::size_t cross_question_batches = 0;
  std::size_t oversize = 0;
  for (const auto& entry : stub.log()) {
    if (entry.n_states > 1) multi_state_batches += 1;
    if (entry.distinct_questions > 1) cross_question_batches += 1;
    if (entry.path == kScorePath && entry.n_states > 8) oversize += 1;
  }

  // zero misalignment: every batched tree must match an unbatched local run
  int identical_trees = 0;
  for (std::size_t i = 0; i < envs.size(); ++i) {
    if (statuses[i] != 200) continue;
    EngineConfig local = cfg;
    local.policy.kind = "synthetic";
    local.policy.url.clear();
    local.value.kind = "oracle";
    local.value.url.clear();
    local.value.scheme = "continuous";
    local.batching.enabled = false;
    local.persist_dir.clear();
    EngineBackends backends = build_backends(local);
    const SolveResult direct = solve_question(local, backends, envs[i].question());
    std::ifstream served((dir / "trees") / (tree_ids[i] + ".json"));
    const std::string served_bytes((std::istreambuf_iterator<char>(served)),
                                   std::istreambuf_iterator<char>());
    if (served_bytes == tree_to_string(direct.outcome.tree, direct.effective)) {
      identical_trees += 1;
    }
  }

  check.detail << correct << "/16 solves correct, " << multi_state_batches
               << " multi-state batches (" << cross_question_batches << " cross-question), "
               << identical_trees << " trees identical to unbatched runs";
  check.require(correct == 16, "a concurrent solve failed or answered wrong");
  check.require(multi_state_batches > 0, "no multi-state batches observed");
  check.require(cross_question_batches > 0, "no cross-solve coalescing observed");
  check.require(oversize == 0, "a value batch exceeded max_batch");
  check.require(identical_trees == 16, "batching altered a solve result");
  return check.ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];

  struct Criterion {
    int id;
    std::string name;
    std::function<bool(Check&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence of Monte-Carlo value labels", criterion_oracle_equivalence},
      {2, "backpropagation matches bottom-up recomputation", criterion_backprop},
      {3, "PUCT hand scores and round-robin exploration", criterion_puct},
      {4, "end-to-end solve rate with oracle values", criterion_solve_rate},
      {5, "TD-advantage identities", criterion_advantages},
      {6, "q/V equivalence on enumerable states", criterion_qv_equivalence},
      {7, "loss function hand values and clip property", criterion_losses},
      {8, "uncertainty metrics and CI-length curve", criterion_metrics},
      {9, "SFT dataset grammar and round trip", criterion_sft_grammar},
      {10, "determinism and persistence across HTTP and CLI", criterion_determinism},
      {11, "service batching under concurrent solves", criterion_service_batching},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Check check;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = criterion.run(check);
    } catch (const std::exception& e) {
      check.detail << "exception: " << e.what();
      ok = false;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id << " ("
              << std::fixed << std::setprecision(2) << secs << "s): " << criterion.name;
    const std::string detail = check.detail.str();
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n";
    std::cout.unsetf(std::ios::fixed);
    if (!ok) failures += 1;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all " << criteria.size() << " acceptance criteria passed\n";
  return 0;
}
