#pragma once

#include <array>
#include <functional>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "trustgame/game.hpp"
#include "trustgame/network.hpp"
#include "trustgame/random.hpp"
#include "trustgame/update_rules.hpp"

namespace trustgame
{

enum class TopologyType { Lattice, ScaleFree };

std::string_view to_token(TopologyType t) noexcept;
std::optional<TopologyType> topology_from_token(std::string_view token) noexcept;

struct TopologySpec
{
  TopologyType type = TopologyType::Lattice;
  int side = 32;       ///< lattice side
  int nodes = 1024;    ///< scale-free population
  int attach = 2;      ///< scale-free edges per arriving node

  int population() const noexcept { return type == TopologyType::Lattice ? side * side : nodes; }
};

struct InitialFractions
{
  double investors = 0.30;
  double trustworthy = 0.25;
  double untrustworthy = 0.45;
};

struct SimConfig
{
  TopologySpec topology;
  double r_t = 6.0;
  double r_ut = 0.33;
  UpdateRuleConfig rule;
  InitialFractions initial;
  int steps = 5000;
  int runs = 100;
  std::uint64_t master_seed = 1;
  std::optional<int> snapshot_every;
  std::vector<NodeId> record_nodes;
  /// When non-empty, each run picks a random focal node plus one probe per
  /// distance and records their strategy series (lattice only).
  std::vector<int> probe_distances;

  GameParams params() const { return GameParams(r_t, r_ut); }
  void validate() const;
};

using CountSeries = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 3>;
using CodeSeries = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

struct Snapshot
{
  int step;
  PopulationState state;
};

struct RunRecord
{
  int run_index = 0;
  std::uint64_t seed = 0;
  CountSeries counts;          ///< (steps + 1) x {I, T, U}
  Eigen::VectorXd wealth;      ///< W per step, t = 0 included
  std::vector<Snapshot> snapshots;
  std::vector<NodeId> recorded_nodes;
  CodeSeries node_series;      ///< (steps + 1) x recorded_nodes.size()

  int steps() const noexcept { return static_cast<int>(wealth.size()) - 1; }
  Eigen::VectorXd investor_series() const { return counts.col(0).cast<double>(); }
};

/// Exact largest-remainder counts placed by a uniform random permutation.
PopulationState init_population(int pop, const InitialFractions& fractions, Rng& rng);

/// Largest-remainder rounding of pop * fractions.
std::array<std::int64_t, 3> apportion(int pop, const InitialFractions& fractions);

/// Key that seeds every agent's substream for one step.
struct StepKey
{
  std::uint64_t master_seed;
  std::uint64_t run;
  std::uint64_t step;
};

/// Synchronous update against precomputed payoffs of `state`.
PopulationState step(const Network& net, std::span<const Strategy> state, const WealthVector& payoffs,
                     const GameParams& params, const UpdateRuleConfig& rule, const StepKey& key);

/// Synchronous update; payoffs are computed from `state` first.
PopulationState step(const Network& net, std::span<const Strategy> state, const GameParams& params,
                     const UpdateRuleConfig& rule, const StepKey& key);

Network build_topology(const TopologySpec& spec, std::uint64_t master_seed, int run_index);

RunRecord run(const SimConfig& config, int run_index);

/// Runs every realization; output is identical for any thread count.
std::vector<RunRecord> run_ensemble(const SimConfig& config, int threads = 1);

/// Calls `task(k)` for k in [0, count) over a pool of worker threads.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(int count, int threads, const std::function<void(int)>& task);

} // namespace trustgame
