#include <doctest.h>

#include <optional>

#include "helpers.hpp"
#include "trustgame/analysis.hpp"
#include "trustgame/engine.hpp"

using namespace trustgame;

namespace
{

SimConfig small_config(Rule rule, int steps = 50, int runs = 2)
{
  SimConfig c;
  c.topology.side = 8;
  c.topology.nodes = 64;
  c.rule.rule = rule;
  c.steps = steps;
  c.runs = runs;
  c.r_ut = 0.33;
  c.master_seed = 17;
  return c;
}

void check_same(const RunRecord& a, const RunRecord& b)
{
  CHECK(a.counts == b.counts);
  CHECK(a.wealth == b.wealth);
  CHECK(a.node_series == b.node_series);
  CHECK(a.recorded_nodes == b.recorded_nodes);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    CHECK(a.snapshots[k].step == b.snapshots[k].step);
    CHECK(a.snapshots[k].state == b.snapshots[k].state);
  }
}

} // namespace

TEST_CASE("initial population")
{
  const auto counts = apportion(1024, {0.30, 0.25, 0.45});
  CHECK(counts == std::array<std::int64_t, 3>{307, 256, 461});

  Rng a(5), b(5);
  const auto s1 = init_population(1024, {0.30, 0.25, 0.45}, a);
  const auto s2 = init_population(1024, {0.30, 0.25, 0.45}, b);
  CHECK(s1 == s2);
  CHECK(strategy_totals(s1) == counts);

  Rng c(1);
  CHECK(init_population(50, {1.0, 0.0, 0.0}, c) == PopulationState(50, Strategy::I));
  CHECK_THROWS_AS(init_population(10, {-0.1, 0.6, 0.5}, c), std::invalid_argument);

  SUBCASE("placement is random, not blocked")
  {
    // The first 307 sites would all be investors without shuffling.
    int investors_in_prefix = 0;
    for (int i = 0; i < 307; ++i) {
      investors_in_prefix += s1[static_cast<std::size_t>(i)] == Strategy::I;
    }
    CHECK(investors_in_prefix < 200);
  }

  SUBCASE("totals always match pop")
  {
    Rng r(8);
    for (int k = 0; k < 200; ++k) {
      const double x = r.uniform();
      const double y = r.uniform() * (1.0 - x);
      const int pop = 1 + static_cast<int>(r.below(500));
      const auto t = apportion(pop, {x, y, 1.0 - x - y});
      CHECK(t[0] + t[1] + t[2] == pop);
    }
  }
}

TEST_CASE("monomorphic populations are absorbing")
{
  const auto net = build_lattice(6);
  const GameParams p(6.0, 0.5);
  for (Rule rule : {Rule::UI, Rule::UI_VM, Rule::MORAN, Rule::PROP}) {
    for (Strategy s : kStrategies) {
      const PopulationState state(36, s);
      CHECK(step(net, state, p, {rule, 0.1}, StepKey{1, 0, 0}) == state);
    }
  }
}

TEST_CASE("step is synchronous")
{
  const auto net = build_lattice(8);
  const GameParams p(6.0, 0.33);
  Rng rng(9);
  const auto state = init_population(64, {0.3, 0.25, 0.45}, rng);
  const auto w = all_payoffs(net, state, p);
  for (Rule rule : {Rule::UI, Rule::UI_VM, Rule::MORAN, Rule::PROP}) {
    const UpdateRuleConfig cfg{rule, 0.1};
    const StepKey key{3, 1, 4};
    const auto next = step(net, state, p, cfg, key);
    // Every agent decides against the frozen pre-step snapshot.
    const FrozenStep frozen{net, state, w};
    for (NodeId i = 0; i < 64; ++i) {
      Rng r = agent_stream(key.master_seed, key.run, key.step, static_cast<std::uint64_t>(i));
      CHECK(next[static_cast<std::size_t>(i)] == apply_rule(cfg, i, frozen, p, r));
    }
    CHECK(step(net, state, p, cfg, key) == next);
  }

  SUBCASE("sentinel: a switch mid-step is invisible to peers")
  {
    // On a 1D ring-like strip of the lattice, agent 0 adopts U from its
    // neighbor; the neighbor on the other side must still see agent 0 as I.
    const auto lat = build_lattice(4);
    PopulationState s(16, Strategy::T);
    s[0] = Strategy::I;
    s[1] = Strategy::U;
    s[5] = Strategy::I;
    const auto payoffs = all_payoffs(lat, s, p);
    const auto next = step(lat, s, payoffs, p, {Rule::UI, 0.0}, StepKey{1, 0, 0});
    auto expected = s;
    for (NodeId i = 0; i < 16; ++i) {
      Rng r(0);
      expected[static_cast<std::size_t>(i)] = ui_update(i, FrozenStep{lat, s, payoffs}, r);
    }
    CHECK(next == expected);
  }
}

TEST_CASE("unconditional imitation admits period-2 cycles")
{
  // Search small lattices for a configuration that oscillates with period 2.
  const GameParams p(6.0, 0.33);
  const UpdateRuleConfig ui{Rule::UI, 0.0};
  std::optional<std::pair<int, PopulationState>> found;
  for (int side = 4; side <= 8 && !found; ++side) {
    const auto net = build_lattice(side);
    for (std::uint64_t seed = 0; seed < 400 && !found; ++seed) {
      Rng rng(seed);
      auto s = init_population(side * side, {0.4, 0.4, 0.2}, rng);
      for (int t = 0; t < 200; ++t) {
        s = step(net, s, p, ui, StepKey{0, 0, static_cast<std::uint64_t>(t)});
      }
      const auto s1 = step(net, s, p, ui, StepKey{0, 0, 200});
      const auto s2 = step(net, s1, p, ui, StepKey{0, 0, 201});
      if (s2 == s && s1 != s) {
        found.emplace(side, s);
      }
    }
  }
  REQUIRE(found.has_value());
  const auto net = build_lattice(found->first);
  const auto& s = found->second;
  const auto next = step(net, s, p, ui, StepKey{5, 5, 5});
  CHECK(next != s);
  CHECK(step(net, next, p, ui, StepKey{6, 6, 6}) == s);
}

TEST_CASE("single run")
{
  SUBCASE("steps = 0 keeps the initial state only")
  {
    auto c = small_config(Rule::UI, 0, 1);
    c.snapshot_every = 1;
    const auto rec = run(c, 0);
    CHECK(rec.wealth.size() == 1);
    CHECK(rec.counts.rows() == 1);
    CHECK(rec.snapshots.size() == 1);
  }
  SUBCASE("no investors means no wealth")
  {
    auto c = small_config(Rule::MORAN, 100, 1);
    c.initial = {0.0, 0.4, 0.6};
    const auto rec = run(c, 0);
    CHECK(rec.wealth.isZero(0.0));
  }
  SUBCASE("counts partition the population at every step")
  {
    SimConfig c;
    c.topology.side = 32;
    c.steps = 5000;
    c.runs = 1;
    c.r_ut = 0.66;
    c.rule.rule = Rule::PROP;
    const auto rec = run(c, 0);
    CHECK(rec.counts.rows() == 5001);
    CHECK((rec.counts.rowwise().sum().array() == 1024).all());
  }
  SUBCASE("snapshots and node series")
  {
    auto c = small_config(Rule::UI_VM, 20, 1);
    c.snapshot_every = 5;
    c.record_nodes = {3, 10};
    c.probe_distances = {2, 4};
    const auto rec = run(c, 0);
    REQUIRE(rec.snapshots.size() == 5);
    CHECK(rec.snapshots[4].step == 20);
    REQUIRE(rec.recorded_nodes.size() == 5);
    CHECK(rec.recorded_nodes[3] == 3);
    CHECK(rec.recorded_nodes[4] == 10);
    const auto net = build_lattice(8);
    CHECK(lattice_distance(net, rec.recorded_nodes[0], rec.recorded_nodes[1]) == 2);
    CHECK(lattice_distance(net, rec.recorded_nodes[0], rec.recorded_nodes[2]) == 4);
    CHECK(rec.node_series.rows() == 21);
    for (int t = 0; t <= 20; t += 5) {
      const auto& snap = rec.snapshots[static_cast<std::size_t>(t / 5)].state;
      CHECK(rec.node_series(t, 3) == code(snap[3]));
    }
  }
  SUBCASE("scale-free graphs are regenerated per run")
  {
    TopologySpec sf{TopologyType::ScaleFree, 0, 200, 2};
    CHECK_FALSE(build_topology(sf, 1, 0) == build_topology(sf, 1, 1));
    CHECK(build_topology(sf, 1, 0) == build_topology(sf, 1, 0));
  }
  SUBCASE("invalid configs")
  {
    auto c = small_config(Rule::UI);
    c.initial = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(run(c, 0), std::invalid_argument);
    c = small_config(Rule::UI);
    c.r_ut = 1.5;
    CHECK_THROWS_AS(run(c, 0), std::invalid_argument);
    c = small_config(Rule::UI);
    c.topology.type = TopologyType::ScaleFree;
    c.probe_distances = {2};
    CHECK_THROWS_AS(run(c, 0), UnsupportedTopology);
  }
}

TEST_CASE("ensembles")
{
  auto c = small_config(Rule::MORAN, 40, 4);
  c.snapshot_every = 10;
  const auto a = run_ensemble(c, 1);
  REQUIRE(a.size() == 4);
  CHECK_FALSE(a[0].counts == a[1].counts);

  const auto b = run_ensemble(c, 1);
  const auto par = run_ensemble(c, 3);
  for (std::size_t r = 0; r < a.size(); ++r) {
    check_same(a[r], b[r]);
    check_same(a[r], par[r]);
    check_same(a[r], run(c, static_cast<int>(r)));
  }

  SUBCASE("scale-free ensembles are thread-count independent")
  {
    auto sf = small_config(Rule::PROP, 30, 3);
    sf.topology = {TopologyType::ScaleFree, 0, 300, 2};
    const auto x = run_ensemble(sf, 1);
    const auto y = run_ensemble(sf, 2);
    for (std::size_t r = 0; r < x.size(); ++r) {
      check_same(x[r], y[r]);
    }
  }
}

TEST_CASE("UI on an easy game yields positive steady-state wealth")
{
  SimConfig c;
  c.topology.side = 32;
  c.rule.rule = Rule::UI;
  c.r_ut = 0.11;
  c.runs = 4;
  c.steps = 5000;
  double mean = 0.0;
  for (const auto& rec : run_ensemble(c, 2)) {
    mean += steady_state_wealth(rec, 0.25);
  }
  CHECK(mean / 4 > 0.0);
}

TEST_CASE("parallel_for reports task failures")
{
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](int k) {
                                 if (k == 7) {
                                   throw std::runtime_error("boom");
                                 }
                               }),
                  std::runtime_error);
}
