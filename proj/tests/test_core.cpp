#include <doctest.h>

#include "rlm/core/serialize.hpp"
#include "rlm/core/tree.hpp"
#include "rlm/core/types.hpp"

using namespace rlm;

namespace {

ReasoningStep step(const std::string& text, StepMarker m = StepMarker::kIntermediate) {
  return ReasoningStep{text, m};
}

State query_state(const std::string& q = "q") { return State(step(q)); }

}  // namespace

TEST_CASE("reasoning step and state invariants") {
  CHECK_THROWS_AS(State(step("")), InvalidState);
  CHECK_THROWS_AS(State(step("q", StepMarker::kFinal)), InvalidState);
  CHECK_THROWS_AS(State::from_steps({}), InvalidState);
  CHECK_THROWS_AS(State::from_steps({step("q"), step("z", StepMarker::kFinal), step("x")}),
                  InvalidState);
  CHECK_THROWS_AS(State::from_steps({step("q", StepMarker::kFinal)}), InvalidState);

  const State s = State::from_steps({step("q"), step("z1"), step("z2", StepMarker::kFinal)});
  CHECK(s.terminal());
  CHECK(s.depth() == 2);
}

TEST_CASE("state_append") {
  const State q = query_state();
  const State s1 = state_append(q, step("z1"));
  CHECK(s1.steps().size() == 2);
  CHECK(q.steps().size() == 1);  // input unchanged

  const State s2 = state_append(s1, step("z2", StepMarker::kFinal));
  CHECK(s2.terminal());

  CHECK_THROWS_AS(state_append(s2, step("z3")), AppendAfterFinal);
  CHECK_THROWS_AS(state_append(q, step("")), InvalidState);
}

TEST_CASE("search config validation") {
  SearchConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  SearchConfig bad = cfg;
  bad.discount = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  bad = cfg;
  bad.discount = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  bad = cfg;
  bad.iterations = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  bad = cfg;
  bad.backprop_weight = 1.2;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  bad = cfg;
  bad.c2 = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
}

TEST_CASE("tree construction and stats") {
  SearchTree tree(query_state());
  CHECK(tree.size() == 1);
  CHECK(tree.stats(tree.root()).visits == 0);
  CHECK_FALSE(tree.stats(tree.root()).terminal);

  const NodeId a = tree.add_child(tree.root(), step("z1"), 0.5, false);
  const NodeId b = tree.add_child(a, step("z2", StepMarker::kFinal), 1.0, true, 1.0);
  CHECK(tree.depth(b) == 2);
  CHECK(tree.state_of(b).terminal());
  CHECK(tree.is_leaf(b));
  CHECK_FALSE(tree.is_leaf(tree.root()));
  CHECK_NOTHROW(tree.validate());

  CHECK_THROWS_AS(tree.add_child(a, step("z"), 1.5, false), InvalidState);   // q bound
  CHECK_THROWS_AS(tree.add_child(a, step("z"), 0.0, false, 1.0), InvalidState);
  CHECK_THROWS_AS(tree.add_child(a, step("z"), 0.0, true), InvalidState);  // marker mismatch
  CHECK_THROWS_AS(tree.stats(99), UnknownNode);
}

TEST_CASE("trajectory_of") {
  SearchTree tree(query_state());
  const NodeId a = tree.add_child(tree.root(), step("z1"), 0.1, false);
  const NodeId b = tree.add_child(a, step("z2"), 0.2, false);
  const NodeId c = tree.add_child(b, step("z3", StepMarker::kFinal), 1.0, true, 1.0);

  const Trajectory root_traj = trajectory_of(tree, tree.root());
  CHECK(root_traj.states.size() == 1);
  CHECK_FALSE(root_traj.terminal);

  const Trajectory deep = trajectory_of(tree, c);
  REQUIRE(deep.states.size() == 4);
  for (std::size_t i = 1; i < deep.states.size(); ++i) {
    CHECK(deep.states[i].steps().size() == deep.states[i - 1].steps().size() + 1);
  }
  CHECK(deep.terminal);
  REQUIRE(deep.terminal_reward.has_value());
  CHECK(*deep.terminal_reward == 1.0);

  CHECK_THROWS_AS(trajectory_of(tree, 42), UnknownNode);
}

TEST_CASE("root path reproduces stored state byte for byte") {
  SearchTree tree(query_state("what is 2+2"));
  NodeId cur = tree.root();
  for (int i = 0; i < 5; ++i) {
    cur = tree.add_child(cur, step("step " + std::to_string(i)), 0.0, false);
  }
  for (NodeId id = 0; id < tree.size(); ++id) {
    std::vector<ReasoningStep> from_path;
    std::vector<NodeId> path;
    for (std::optional<NodeId> it = id; it; it = tree.parent(*it)) path.push_back(*it);
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      from_path.push_back(tree.step_of(*it));
    }
    CHECK(State::from_steps(from_path) == tree.state_of(id));
  }
}

TEST_CASE("tree json round trip") {
  SearchTree tree(query_state("sum-game target=3 depth=2 increments=1,2"));
  const NodeId a = tree.add_child(tree.root(), step("add 1"), 0.123456789012345, false);
  tree.add_child(a, step("answer = 1", StepMarker::kFinal), -1.0, true, -1.0);
  tree.add_child(tree.root(), step("add 2"), -0.25, false);
  tree.stats(tree.root()).visits = 7;
  tree.stats(tree.root()).q = 0.7071067811865476;

  SearchConfig cfg;
  cfg.seed = 42;
  cfg.mode = SearchMode::kTraining;

  const std::string text = tree_to_string(tree, cfg);
  auto [loaded, loaded_cfg] = tree_from_string(text);
  CHECK(loaded.size() == tree.size());
  CHECK(loaded_cfg.seed == 42);
  CHECK(loaded_cfg.mode == SearchMode::kTraining);
  for (NodeId id = 0; id < tree.size(); ++id) {
    CHECK(loaded.state_of(id) == tree.state_of(id));
    CHECK(loaded.stats(id).visits == tree.stats(id).visits);
    CHECK(loaded.stats(id).q == doctest::Approx(tree.stats(id).q).epsilon(1e-12));
    CHECK(loaded.stats(id).terminal == tree.stats(id).terminal);
    CHECK(loaded.stats(id).reward == tree.stats(id).reward);
  }

  // save -> load -> save is byte-stable
  CHECK(tree_to_string(loaded, loaded_cfg) == text);
}

TEST_CASE("config json round trip") {
  SearchConfig cfg;
  cfg.iterations = 17;
  cfg.discount = 0.97;
  cfg.extend_until_terminal = true;
  const SearchConfig back = config_from_json(config_to_json(cfg));
  CHECK(back.iterations == 17);
  CHECK(back.discount == cfg.discount);
  CHECK(back.extend_until_terminal);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"discount", 2.0}}), InvalidConfig);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"mode", "foo"}}), InvalidConfig);
}
