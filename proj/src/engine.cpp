#include "trustgame/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "trustgame/analysis.hpp"

namespace trustgame
{

std::string_view to_token(TopologyType t) noexcept
{
  return t == TopologyType::Lattice ? "lattice" : "scale_free";
}

std::optional<TopologyType> topology_from_token(std::string_view token) noexcept
{
  if (token == "lattice") {
    return TopologyType::Lattice;
  }
  if (token == "scale_free") {
    return TopologyType::ScaleFree;
  }
  return std::nullopt;
}

void SimConfig::validate() const
{
  (void)params();
  rule.validate();
  const std::array<double, 3> f{initial.investors, initial.trustworthy, initial.untrustworthy};
  for (double x : f) {
    if (!(x >= 0.0)) {
      throw std::invalid_argument("initial fractions must be non-negative");
    }
  }
  if (std::abs(f[0] + f[1] + f[2] - 1.0) > 1e-9) {
    throw std::invalid_argument("initial fractions must sum to 1");
  }
  if (steps < 0) {
    throw std::invalid_argument("steps must be non-negative, got " + std::to_string(steps));
  }
  if (runs < 1) {
    throw std::invalid_argument("runs must be >= 1, got " + std::to_string(runs));
  }
  if (snapshot_every && *snapshot_every < 1) {
    throw std::invalid_argument("snapshot_every must be >= 1");
  }
  if (topology.type == TopologyType::Lattice && topology.side < 2) {
    throw std::invalid_argument("side must be >= 2");
  }
  if (topology.type == TopologyType::ScaleFree && topology.nodes <= topology.attach) {
    throw std::invalid_argument("nodes must exceed attach");
  }
  const int pop = topology.population();
  for (NodeId n : record_nodes) {
    if (n < 0 || n >= pop) {
      throw std::invalid_argument("record_nodes entry out of range: " + std::to_string(n));
    }
  }
  if (!probe_distances.empty() && topology.type != TopologyType::Lattice) {
    throw UnsupportedTopology("probe_distances require a lattice topology");
  }
}

std::array<std::int64_t, 3> apportion(int pop, const InitialFractions& fractions)
{
  const std::array<double, 3> f{fractions.investors, fractions.trustworthy, fractions.untrustworthy};
  std::array<std::int64_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::int64_t assigned = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    if (f[s] < 0.0) {
      throw std::invalid_argument("initial fractions must be non-negative");
    }
    const double exact = f[s] * pop;
    counts[s] = static_cast<std::int64_t>(std::floor(exact));
    remainder[s] = exact - static_cast<double>(counts[s]);
    assigned += counts[s];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < pop; k = (k + 1) % 3) {
    ++counts[order[k]];
    ++assigned;
  }
  while (assigned > pop) {
    // Only reachable when fractions sum slightly above 1.
    for (std::size_t k = 3; k-- > 0 && assigned > pop;) {
      if (counts[order[k]] > 0) {
        --counts[order[k]];
        --assigned;
      }
    }
  }
  return counts;
}

PopulationState init_population(int pop, const InitialFractions& fractions, Rng& rng)
{
  const auto counts = apportion(pop, fractions);
  PopulationState state;
  state.reserve(static_cast<std::size_t>(pop));
  for (Strategy s : kStrategies) {
    state.insert(state.end(), static_cast<std::size_t>(counts[index(s)]), s);
  }
  for (std::size_t k = state.size(); k > 1; --k) {
    std::swap(state[k - 1], state[rng.below(k)]);
  }
  return state;
}

PopulationState step(const Network& net, std::span<const Strategy> state, const WealthVector& payoffs,
                     const GameParams& params, const UpdateRuleConfig& rule, const StepKey& key)
{
  const FrozenStep prev{net, state, payoffs};
  PopulationState next(state.size());
  for (NodeId i = 0; i < net.size(); ++i) {
    Rng rng = agent_stream(key.master_seed, key.run, key.step, static_cast<std::uint64_t>(i));
    next[static_cast<std::size_t>(i)] = apply_rule(rule, i, prev, params, rng);
  }
  return next;
}

PopulationState step(const Network& net, std::span<const Strategy> state, const GameParams& params,
                     const UpdateRuleConfig& rule, const StepKey& key)
{
  return step(net, state, all_payoffs(net, state, params), params, rule, key);
}

Network build_topology(const TopologySpec& spec, std::uint64_t master_seed, int run_index)
{
  if (spec.type == TopologyType::Lattice) {
    return build_lattice(spec.side);
  }
  Rng rng = run_stream(master_seed, static_cast<std::uint64_t>(run_index), StreamTag::Graph);
  return build_scale_free(spec.nodes, spec.attach, rng);
}

RunRecord run(const SimConfig& config, int run_index)
{
  config.validate();
  const GameParams params = config.params();
  const auto run_key = static_cast<std::uint64_t>(run_index);
  const Network net = build_topology(config.topology, config.master_seed, run_index);

  Rng pop_rng = run_stream(config.master_seed, run_key, StreamTag::Population);
  PopulationState state = init_population(net.size(), config.initial, pop_rng);

  RunRecord rec;
  rec.run_index = run_index;
  rec.seed = config.master_seed;
  if (!config.probe_distances.empty()) {
    Rng probe_rng = run_stream(config.master_seed, run_key, StreamTag::Probe);
    const auto focal = static_cast<NodeId>(probe_rng.below(static_cast<std::uint64_t>(net.size())));
    rec.recorded_nodes.push_back(focal);
    const auto probes = select_probe_nodes(net, focal, config.probe_distances, probe_rng);
    rec.recorded_nodes.insert(rec.recorded_nodes.end(), probes.begin(), probes.end());
  }
  rec.recorded_nodes.insert(rec.recorded_nodes.end(), config.record_nodes.begin(), config.record_nodes.end());

  const int steps = config.steps;
  rec.counts.resize(steps + 1, 3);
  rec.wealth.resize(steps + 1);
  rec.node_series.resize(steps + 1, static_cast<Eigen::Index>(rec.recorded_nodes.size()));

  for (int t = 0;; ++t) {
    const WealthVector w = all_payoffs(net, state, params);
    const auto totals = strategy_totals(state);
    for (int s = 0; s < 3; ++s) {
      rec.counts(t, s) = totals[static_cast<std::size_t>(s)];
    }
    rec.wealth[t] = global_net_wealth(w);
    for (std::size_t k = 0; k < rec.recorded_nodes.size(); ++k) {
      rec.node_series(t, static_cast<Eigen::Index>(k)) =
          static_cast<std::int8_t>(code(state[static_cast<std::size_t>(rec.recorded_nodes[k])]));
    }
    if (config.snapshot_every && t % *config.snapshot_every == 0) {
      rec.snapshots.push_back({t, state});
    }
    if (t == steps) {
      break;
    }
    state = step(net, state, w, params, config.rule,
                 StepKey{config.master_seed, run_key, static_cast<std::uint64_t>(t)});
  }
  return rec;
}

void parallel_for(int count, int threads, const std::function<void(int)>& task)
{
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int k = 0; k < count; ++k) {
      task(k);
    }
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int k = next++; k < count; k = next++) {
          try {
            task(k);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) {
              error = std::current_exception();
            }
            next = count;
          }
        }
      });
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

std::vector<RunRecord> run_ensemble(const SimConfig& config, int threads)
{
  config.validate();
  std::vector<RunRecord> records(static_cast<std::size_t>(config.runs));
  parallel_for(config.runs, threads, [&](int r) { records[static_cast<std::size_t>(r)] = run(config, r); });
  return records;
}

} // namespace trustgame
