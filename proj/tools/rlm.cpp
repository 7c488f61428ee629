// Command-line front end: solve, gen-data, rollout, export, metrics, loss,
// serve. Exit codes: 0 success, 1 domain error, 2 usage error.

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlm/backends/remote.hpp"
#include "rlm/backends/synthetic.hpp"
#include "rlm/core/serialize.hpp"
#include "rlm/labeling/labels.hpp"
#include "rlm/labeling/sft.hpp"
#include "rlm/losses/losses.hpp"
#include "rlm/metrics/ci.hpp"
#include "rlm/metrics/distribution.hpp"
#include "rlm/pipeline/export.hpp"
#include "rlm/pipeline/rollout.hpp"
#include "rlm/pipeline/selection.hpp"
#include "rlm/search/mcts.hpp"
#include "rlm/search/transform.hpp"
#include "rlm/service/engine.hpp"
#include "rlm/service/http.hpp"
#include "rlm/util/rng.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

rlm::EngineConfig load_config(const CommonOpts& opts) {
  rlm::EngineConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = rlm::load_engine_config(opts.config_path);
  }
  if (opts.seed) cfg.search.seed = *opts.seed;
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "engine config file (JSON)")
      ->envname("RLM_CONFIG");
  cmd->add_option("--seed", opts->seed, "seed override")->envname("RLM_SEED");
}

std::vector<rlm::RolloutQuestion> read_questions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rlm::InvalidConfig("cannot open questions file " + path);
  std::vector<rlm::RolloutQuestion> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rlm::RolloutQuestion q;
    if (line.front() == '{') {
      const json j = json::parse(line);
      q.question = j.at("question").get<std::string>();
      q.golden = j.value("golden", std::string());
    } else {
      q.question = line;
    }
    if (q.golden.empty()) {
      q.golden = rlm::SyntheticEnv::from_question(q.question).golden();
    }
    out.push_back(std::move(q));
  }
  if (out.empty()) throw rlm::InvalidConfig("questions file " + path + " is empty");
  return out;
}

std::ofstream open_out(const std::string& path) {
  if (auto dir = std::filesystem::path(path).parent_path(); !dir.empty()) {
    std::filesystem::create_directories(dir);
  }
  std::ofstream out(path);
  if (!out) throw rlm::Error("cannot write " + path);
  return out;
}

int cmd_solve(const CommonOpts& common, const std::string& question, bool training,
              const std::string& golden, const std::string& out_path) {
  rlm::EngineConfig cfg = load_config(common);
  if (training) {
    cfg.search.mode = rlm::SearchMode::kTraining;
    if (golden.empty()) {
      throw rlm::InvalidConfig("--training requires --golden with the expected answer");
    }
  }
  rlm::EngineBackends backends = rlm::build_backends(cfg);
  std::optional<std::string> golden_opt;
  if (training) golden_opt = golden;
  rlm::SolveResult result = rlm::solve_question(cfg, backends, question, golden_opt);

  const rlm::MctsOutcome& out = result.outcome;
  if (!out_path.empty()) {
    open_out(out_path) << rlm::tree_to_string(out.tree, result.effective);
  }

  ordered_json summary{{"terminal", out.best_path && out.best_path->terminal},
                       {"iterations_run", out.iterations_run},
                       {"terminals_found", out.terminals_found},
                       {"tree_ref", result.tree_id},
                       {"backend_seeds",
                        ordered_json{{"policy", cfg.policy.seed}, {"value", cfg.value.seed}}}};
  if (out.best_path) {
    const rlm::State& final_state = out.best_path->states.back();
    summary["q"] = out.tree.stats(*out.best_node).q;
    if (auto ans = rlm::extract_answer(final_state)) summary["answer"] = *ans;
    ordered_json steps = ordered_json::array();
    for (const auto& s : final_state.steps()) steps.push_back(rlm::step_to_json(s));
    summary["best_path"] = steps;
  }
  if (!out.errors.empty()) summary["errors"] = out.errors;
  std::cout << summary.dump(2) << "\n";
  return (out.best_path && out.best_path->terminal) ? 0 : 1;
}

int cmd_gen_data(const CommonOpts& common, const std::string& task, const std::string& env_kind,
                 const std::vector<std::string>& questions_flag,
                 const std::string& questions_path, int n, double gamma, int max_depth,
                 int branching, bool all_states, const std::string& scheme,
                 bool no_assistant, const std::string& policy_url,
                 const std::string& out_path) {
  std::vector<rlm::RolloutQuestion> questions;
  for (const std::string& q : questions_flag) {
    questions.push_back({q, rlm::SyntheticEnv::from_question(q).golden()});
  }
  if (!questions_path.empty()) {
    auto more = read_questions(questions_path);
    questions.insert(questions.end(), more.begin(), more.end());
  }
  if (questions.empty()) {
    throw rlm::InvalidConfig("gen-data needs --question or --questions");
  }

  const std::uint64_t seed = common.seed.value_or(0);
  std::shared_ptr<rlm::PolicyBackend> policy;
  if (env_kind == "synthetic") {
    policy = std::make_shared<rlm::SyntheticPolicy>(seed);
  } else if (env_kind == "remote") {
    if (policy_url.empty()) throw rlm::InvalidConfig("--env remote needs --policy-url");
    policy = std::make_shared<rlm::RemotePolicy>(rlm::RemoteOptions{policy_url, {}});
  } else {
    throw rlm::InvalidConfig("unknown env kind " + env_kind);
  }
  rlm::SumGameVerifier verifier;

  rlm::SimulationParams params;
  params.n = n;
  params.gamma = gamma;
  params.max_depth = max_depth;
  params.branching = branching;
  params.seed = seed;

  std::ofstream out = open_out(out_path);
  std::size_t records = 0;

  if (task == "sft") {
    rlm::SftMarkers markers;
    markers.insert_assistant = !no_assistant;
    std::vector<rlm::SftTrace> traces;
    for (std::size_t qi = 0; qi < questions.size(); ++qi) {
      const rlm::State root(
          rlm::ReasoningStep{questions[qi].question, rlm::StepMarker::kIntermediate});
      for (int i = 0; i < n; ++i) {
        std::mt19937_64 rng =
            rlm::substream(seed ^ rlm::fnv1a64(questions[qi].question), i);
        rlm::State cur = root;
        // sample one full completion; keep it only if it terminates
        for (int d = 0; d < max_depth && !cur.terminal(); ++d) {
          auto cands = policy->generate(cur, branching, params.diversity);
          if (cands.empty()) break;
          std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
          cur = cur.append(cands[pick(rng)]);
        }
        if (!cur.terminal()) continue;
        rlm::SftTrace trace;
        trace.question = questions[qi].question;
        trace.steps.assign(cur.steps().begin() + 1, cur.steps().end());
        traces.push_back(std::move(trace));
      }
    }
    const auto dataset = rlm::build_sft_dataset(traces, markers);
    rlm::write_sft(out, dataset);
    records = dataset.size();
  } else if (task == "vlabel") {
    if (scheme != "binary" && scheme != "continuous") {
      throw rlm::InvalidConfig("--scheme must be binary or continuous");
    }
    std::vector<rlm::ValueLabel> labels;
    for (const auto& q : questions) {
      std::vector<rlm::State> states;
      if (all_states) {
        if (env_kind != "synthetic") {
          throw rlm::InvalidConfig("--all-states requires --env synthetic");
        }
        states = rlm::enumerate_states(rlm::SyntheticEnv::from_question(q.question), true);
      } else {
        states.push_back(
            rlm::State(rlm::ReasoningStep{q.question, rlm::StepMarker::kIntermediate}));
      }
      for (const rlm::State& s : states) {
        auto both = rlm::monte_carlo_labels(s, *policy, verifier, q.golden, params);
        labels.push_back(scheme == "binary" ? both.binary : both.continuous);
      }
    }
    rlm::write_value_labels(out, labels);
    records = labels.size();
  } else if (task == "qlabel") {
    if (env_kind != "synthetic") {
      throw rlm::InvalidConfig("qlabel generation requires --env synthetic");
    }
    std::vector<rlm::QLabel> labels;
    for (const auto& q : questions) {
      const rlm::SyntheticEnv env = rlm::SyntheticEnv::from_question(q.question);
      for (const rlm::State& child : rlm::enumerate_states(env, true)) {
        if (child.depth() == 0) continue;  // the root is not a transition
        if (child.terminal()) {
          const double r = verifier.check(child, q.golden) ? 1.0 : -1.0;
          labels.push_back(rlm::q_label(child, r, gamma));
        } else {
          auto v = rlm::continuous_value_label(child, *policy, verifier, q.golden, params);
          labels.push_back(rlm::q_label(child, v.value, gamma));
        }
      }
    }
    for (const auto& l : labels) {
      out << ordered_json{{"state_action", rlm::state_to_json(l.state_action)},
                          {"target", l.target}}
                 .dump()
          << '\n';
    }
    records = labels.size();
  } else {
    throw rlm::InvalidConfig("unknown task " + task);
  }

  std::cerr << "wrote " << records << " records to " << out_path << "\n";
  return 0;
}

int cmd_rollout(const CommonOpts& common, const std::string& questions_path,
                const std::string& buffer_dir, int workers) {
  rlm::EngineConfig cfg = load_config(common);
  cfg.search.mode = rlm::SearchMode::kTraining;
  rlm::EngineBackends backends = rlm::build_backends(cfg);
  const auto questions = read_questions(questions_path);

  rlm::ReplayBuffer buffer;
  rlm::RolloutReport report =
      rlm::rollout_phase(questions, cfg.search, *backends.policy, *backends.value,
                         *backends.verifier, &buffer, workers);

  std::filesystem::create_directories(buffer_dir);
  std::filesystem::create_directories(std::filesystem::path(buffer_dir) / "trees");
  {
    std::ofstream out(std::filesystem::path(buffer_dir) / "buffer.ndjson");
    rlm::write_replay_entries(out, buffer);
  }
  for (std::size_t i = 0; i < report.pruned_trees.size(); ++i) {
    std::ofstream out(std::filesystem::path(buffer_dir) / "trees" /
                      ("q" + std::to_string(i) + ".json"));
    out << rlm::tree_to_string(report.pruned_trees[i], cfg.search);
  }

  ordered_json per_question = ordered_json::array();
  for (const auto& q : report.questions) {
    per_question.push_back(ordered_json{{"question", q.question},
                                        {"ok", q.ok},
                                        {"solved", q.solved},
                                        {"terminals_found", q.terminals_found},
                                        {"entries", q.entries_added},
                                        {"error", q.error}});
  }
  ordered_json meta{{"questions", per_question},
                    {"solved", report.solved},
                    {"failed", report.failed},
                    {"solve_rate", report.solve_rate()},
                    {"buffer_entries", buffer.size()},
                    {"gamma", cfg.search.discount},
                    {"config", rlm::engine_config_to_json(cfg)}};
  {
    std::ofstream out(std::filesystem::path(buffer_dir) / "meta.json");
    out << meta.dump(2) << "\n";
  }
  std::cout << ordered_json{{"solved", report.solved},
                            {"failed", report.failed},
                            {"solve_rate", report.solve_rate()},
                            {"buffer_entries", buffer.size()}}
                   .dump(2)
            << "\n";
  return 0;
}

int cmd_export(const std::string& kind, const std::string& buffer_dir,
               const std::string& out_path, double margin, std::size_t max_pairs,
               int sft_top_k, std::optional<double> sft_threshold) {
  namespace fs = std::filesystem;
  std::ofstream out = open_out(out_path);
  std::size_t records = 0;

  if (kind == "ppo" || kind == "qvm") {
    std::ifstream in(fs::path(buffer_dir) / "buffer.ndjson");
    if (!in) throw rlm::InvalidConfig("no buffer.ndjson under " + buffer_dir);
    rlm::ReplayBuffer buffer;
    buffer.push_many(rlm::read_replay_entries(in));
    if (kind == "ppo") {
      const auto recs = rlm::to_ppo_records(buffer);
      rlm::write_ppo(out, recs);
      records = recs.size();
    } else {
      const auto recs = rlm::to_qvm_records(buffer);
      rlm::write_qvm(out, recs);
      records = recs.size();
    }
  } else if (kind == "dpo" || kind == "sft") {
    std::vector<rlm::SearchTree> trees;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(fs::path(buffer_dir) / "trees")) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f);
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      trees.push_back(rlm::tree_from_string(text).first);
    }
    if (kind == "dpo") {
      const auto pairs = rlm::select_dpo_pairs(trees, margin, max_pairs);
      const auto recs = rlm::to_dpo_records(pairs);
      rlm::write_dpo(out, recs);
      records = recs.size();
    } else {
      const rlm::SftSelection selection = sft_threshold
                                              ? rlm::SftSelection::q_threshold(*sft_threshold)
                                              : rlm::SftSelection::top_k(sft_top_k);
      const auto traces = rlm::select_sft_sequences(trees, selection);
      const auto dataset = rlm::build_sft_dataset(traces);
      rlm::write_sft(out, dataset);
      records = dataset.size();
    }
  } else {
    throw rlm::InvalidConfig("unknown export kind " + kind);
  }
  std::cerr << "wrote " << records << " records to " << out_path << "\n";
  return 0;
}

int cmd_metrics_tokens(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw rlm::InvalidConfig("cannot open " + in_path);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    rlm::TokenDistribution dist;
    if (j.contains("probs")) {
      dist.probs = j.at("probs").get<std::vector<double>>();
    } else if (j.contains("logprobs")) {
      for (double lp : j.at("logprobs").get<std::vector<double>>()) {
        dist.probs.push_back(std::exp(lp));
      }
    } else {
      throw rlm::InvalidConfig("rows need a probs or logprobs array");
    }
    std::vector<double> sorted = dist.probs;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const double top1 = sorted.empty() ? 0.0 : sorted[0];
    const double top2 = sorted.size() > 1 ? sorted[1] : 0.0;
    ordered_json row{{"entropy", rlm::metrics::entropy_bits(dist)},
                     {"varentropy", rlm::metrics::varentropy(dist)},
                     {"gini", nullptr},
                     {"variance", rlm::metrics::prob_variance(dist)},
                     {"flag", rlm::metrics::flag_name(
                                  rlm::metrics::uncertainty_flags(top1, top2))}};
    if (dist.probs.size() >= 2) row["gini"] = rlm::metrics::gini(dist);
    (*os) << row.dump() << '\n';
  }
  return 0;
}

int cmd_metrics_ci(const std::string& matrix_path, const std::string& sizes_csv,
                   int resamples, std::uint64_t seed, const std::string& out_path) {
  std::ifstream in(matrix_path);
  if (!in) throw rlm::InvalidConfig("cannot open " + matrix_path);
  json j;
  in >> j;
  rlm::CorrectnessMatrix m;
  m.rows = j.at("rows").get<std::vector<std::vector<int>>>();

  std::vector<int> sizes;
  std::stringstream ss(sizes_csv);
  std::string item;
  while (std::getline(ss, item, ',')) sizes.push_back(std::stoi(item));
  if (sizes.empty()) throw rlm::InvalidConfig("--sizes must list at least one size");

  const auto curve = rlm::metrics::ci_length_curve(m, sizes, resamples, seed);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_out(out_path);
    os = &file;
  }
  (*os) << "size,mean_ci_length\n";
  for (const auto& [size, len] : curve) (*os) << size << "," << len << "\n";
  return 0;
}

int cmd_loss_eval(const std::string& kind, const std::string& in_path, double epsilon,
                  double beta) {
  std::ifstream in(in_path);
  if (!in) throw rlm::InvalidConfig("cannot open " + in_path);
  std::vector<json> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(json::parse(line));
  }
  if (rows.empty()) throw rlm::EmptyInput("no rows in " + in_path);

  double value = 0.0;
  if (kind == "ppo") {
    double acc = 0.0;
    for (const auto& r : rows) {
      acc += rlm::losses::ppo_clip_objective(r.at("ratio").get<double>(),
                                             r.at("advantage").get<double>(), epsilon);
    }
    value = acc / static_cast<double>(rows.size());
  } else if (kind == "dpo") {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& r : rows) {
      pairs.emplace_back(r.at("logp_plus").get<double>(), r.at("logp_minus").get<double>());
    }
    value = rlm::losses::dpo_objective_batch(pairs, beta);
  } else if (kind == "ce") {
    std::vector<std::vector<double>> batch;
    for (const auto& r : rows) batch.push_back(r.at("logprobs").get<std::vector<double>>());
    value = rlm::losses::completion_ce_batch(batch);
  } else if (kind == "bce") {
    std::vector<std::pair<double, int>> batch;
    for (const auto& r : rows) {
      batch.emplace_back(r.at("pred").get<double>(), r.at("label").get<int>());
    }
    value = rlm::losses::bce_batch(batch);
  } else if (kind == "mse") {
    std::vector<std::pair<double, double>> batch;
    for (const auto& r : rows) {
      batch.emplace_back(r.at("pred").get<double>(), r.at("target").get<double>());
    }
    value = rlm::losses::mse_batch(batch);
  } else if (kind == "kl") {
    double acc = 0.0;
    for (const auto& r : rows) {
      acc += rlm::losses::kl_term(r.at("logp_theta").get<std::vector<double>>(),
                                  r.at("logp_ref").get<std::vector<double>>());
    }
    value = acc / static_cast<double>(rows.size());
  } else if (kind == "entropy") {
    std::vector<rlm::TokenDistribution> batch;
    for (const auto& r : rows) {
      batch.push_back(rlm::TokenDistribution{r.at("probs").get<std::vector<double>>()});
    }
    value = rlm::losses::entropy_penalty(batch);
  } else {
    throw rlm::InvalidConfig("unknown loss kind " + kind);
  }
  std::cout << ordered_json{{"kind", kind}, {"value", value}, {"rows", rows.size()}}.dump()
            << "\n";
  return 0;
}

int cmd_serve(const CommonOpts& common, const std::string& host, int port) {
  rlm::EngineConfig cfg = load_config(common);
  rlm::EngineService service(cfg);
  service.start(host, port);
  std::cerr << "serving on " << host << ":" << service.port() << " (ctrl-c to stop)\n";
  static rlm::EngineService* running = &service;
  std::signal(SIGINT, [](int) { running->stop(); });
  std::signal(SIGTERM, [](int) { running->stop(); });
  // block until stopped
  for (;;) {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    if (!running) break;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reasoning-search engine: MCTS over explicit reasoning steps"};
  app.require_subcommand(1);

  CommonOpts solve_common, rollout_common, serve_common, gen_common;

  // solve
  auto* solve = app.add_subcommand("solve", "run MCTS on one question");
  std::string question, golden, solve_out;
  bool training = false;
  solve->add_option("--question", question, "question text")->required();
  add_common(solve, &solve_common);
  solve->add_flag("--training", training, "training mode (requires --golden)");
  solve->add_option("--golden", golden, "golden answer for the verifier");
  solve->add_option("--out", solve_out, "path for the persisted tree JSON");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate labeling datasets");
  std::string task, env_kind = "synthetic", questions_path, scheme = "continuous";
  std::string policy_url, gen_out;
  std::vector<std::string> question_flags;
  int n = 100, gen_max_depth = 32, branching = 8;
  double gen_gamma = 1.0;
  bool all_states = false, no_assistant = false;
  gen->add_option("--task", task, "sft | vlabel | qlabel")->required();
  gen->add_option("--env", env_kind, "synthetic | remote");
  gen->add_option("--question", question_flags, "question text (repeatable)");
  gen->add_option("--questions", questions_path, "questions file (text or ndjson)");
  gen->add_option("--n", n, "simulations per label / traces per question");
  gen->add_option("--gamma", gen_gamma, "discount factor");
  gen->add_option("--max-depth", gen_max_depth, "rollout depth cap");
  gen->add_option("--branching", branching, "candidates per rollout step");
  gen->add_flag("--all-states", all_states, "label every synthetic env state");
  gen->add_option("--scheme", scheme, "vlabel scheme: binary | continuous");
  gen->add_flag("--no-assistant-marker", no_assistant, "omit the assistant marker");
  gen->add_option("--policy-url", policy_url, "remote policy url (env remote)");
  gen->add_option("--out", gen_out, "output file (ndjson)")->required();
  add_common(gen, &gen_common);

  // rollout
  auto* rollout = app.add_subcommand("rollout", "training-mode rollout phase");
  std::string rollout_questions, buffer_dir;
  int workers = 4;
  rollout->add_option("--questions", rollout_questions, "questions file")->required();
  rollout->add_option("--buffer", buffer_dir, "buffer output directory")->required();
  rollout->add_option("--workers", workers, "parallel questions");
  add_common(rollout, &rollout_common);

  // export
  auto* exp = app.add_subcommand("export", "export training datasets from a buffer");
  std::string export_kind, export_buffer, export_out;
  double margin = 0.5;
  std::size_t max_pairs = 10000;
  int sft_top_k = 1;
  std::optional<double> sft_threshold;
  exp->add_option("--kind", export_kind, "ppo | dpo | sft | qvm")->required();
  exp->add_option("--buffer", export_buffer, "buffer directory from rollout")->required();
  exp->add_option("--out", export_out, "output file (ndjson)")->required();
  exp->add_option("--margin", margin, "dpo sibling q-gap margin");
  exp->add_option("--max-pairs", max_pairs, "dpo pair cap");
  exp->add_option("--sft-top-k", sft_top_k, "sft: top-k terminal sequences");
  exp->add_option("--sft-threshold", sft_threshold, "sft: keep terminal q strictly above");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "token and benchmark metrics");
  metrics->require_subcommand(1);
  auto* tokens = metrics->add_subcommand("tokens", "per-token distribution metrics");
  std::string tokens_in, tokens_out;
  tokens->add_option("--logprobs", tokens_in, "ndjson rows with probs or logprobs")
      ->required();
  tokens->add_option("--out", tokens_out, "output file (default stdout)");
  auto* ci = metrics->add_subcommand("ci", "confidence-interval length curve");
  std::string matrix_path, sizes_csv = "50,100,200,500", ci_out;
  int resamples = 32;
  std::uint64_t ci_seed = 0;
  ci->add_option("--matrix", matrix_path, "JSON {rows:[[0|1...]...]}")->required();
  ci->add_option("--sizes", sizes_csv, "comma-separated set sizes");
  ci->add_option("--resamples", resamples, "subsets per size");
  ci->add_option("--seed", ci_seed, "sampling seed")->envname("RLM_SEED");
  ci->add_option("--out", ci_out, "output CSV (default stdout)");

  // loss
  auto* loss = app.add_subcommand("loss", "loss spot checks");
  loss->require_subcommand(1);
  auto* loss_eval = loss->add_subcommand("eval", "evaluate a loss over ndjson rows");
  std::string loss_kind, loss_in;
  double epsilon = 0.2, beta = 1.0;
  loss_eval->add_option("--kind", loss_kind, "ppo | dpo | ce | bce | mse | kl | entropy")
      ->required();
  loss_eval->add_option("--in", loss_in, "input ndjson")->required();
  loss_eval->add_option("--epsilon", epsilon, "ppo clip epsilon");
  loss_eval->add_option("--beta", beta, "dpo beta");

  // serve
  auto* serve = app.add_subcommand("serve", "run the engine HTTP service");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host, "bind host");
  serve->add_option("--port", port, "bind port");
  add_common(serve, &serve_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*solve) return cmd_solve(solve_common, question, training, golden, solve_out);
    if (*gen) {
      return cmd_gen_data(gen_common, task, env_kind, question_flags, questions_path, n,
                          gen_gamma, gen_max_depth, branching, all_states, scheme,
                          no_assistant, policy_url, gen_out);
    }
    if (*rollout) return cmd_rollout(rollout_common, rollout_questions, buffer_dir, workers);
    if (*exp) {
      return cmd_export(export_kind, export_buffer, export_out, margin, max_pairs, sft_top_k,
                        sft_threshold);
    }
    if (*tokens) return cmd_metrics_tokens(tokens_in, tokens_out);
    if (*ci) return cmd_metrics_ci(matrix_path, sizes_csv, resamples, ci_seed, ci_out);
    if (*loss_eval) return cmd_loss_eval(loss_kind, loss_in, epsilon, beta);
    if (*serve) return cmd_serve(serve_common, host, port);
  } catch (const rlm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
