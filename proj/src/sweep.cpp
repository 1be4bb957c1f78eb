#include "trustgame/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "trustgame/analysis.hpp"

namespace trustgame
{

InitialFractions GridPoint::fractions() const
{
  const auto d = static_cast<double>(divisions);
  return {investors / d, trustworthy / d, untrustworthy / d};
}

std::vector<GridPoint> initial_condition_grid(double step)
{
  if (!(step > 0.0 && step <= 0.5)) {
    throw std::invalid_argument("grid step must lie in (0, 0.5], got " + fmt::format("{}", step));
  }
  const double inverse = 1.0 / step;
  const long divisions = std::lround(inverse);
  if (std::abs(inverse - static_cast<double>(divisions)) > 1e-9 * inverse) {
    throw std::invalid_argument("grid step must divide 1 exactly, got " + fmt::format("{}", step));
  }
  const int d = static_cast<int>(divisions);
  std::vector<GridPoint> grid;
  for (int i = 0; i <= d; ++i) {
    for (int t = 0; t <= d - i; ++t) {
      grid.push_back({i, t, d - i - t, d});
    }
  }
  return grid;
}

std::string SweepCell::key() const
{
  return fmt::format("{}|{}|{}|{}/{}/{}:{}", to_token(topology), to_token(rule), r_ut, point.investors,
                     point.trustworthy, point.untrustworthy, point.divisions);
}

std::vector<SweepCell> sweep_cells(const SweepSpec& spec)
{
  if (spec.grid.empty() || spec.rules.empty() || spec.topologies.empty() || spec.r_ut_values.empty()) {
    throw std::invalid_argument("sweep needs non-empty grid, rules, topologies and r_UT values");
  }
  std::vector<SweepCell> cells;
  cells.reserve(spec.grid.size() * spec.rules.size() * spec.topologies.size() * spec.r_ut_values.size());
  for (auto topo : spec.topologies) {
    for (auto rule : spec.rules) {
      for (double r : spec.r_ut_values) {
        for (const auto& p : spec.grid) {
          cells.push_back({topo, rule, r, p});
        }
      }
    }
  }
  auto order = [](const SweepCell& c) {
    return std::make_tuple(static_cast<int>(c.topology), static_cast<int>(c.rule), c.r_ut,
                           c.point.investors * 1.0 / c.point.divisions, c.point.trustworthy * 1.0 / c.point.divisions);
  };
  std::stable_sort(cells.begin(), cells.end(), [&](const auto& a, const auto& b) { return order(a) < order(b); });
  return cells;
}

SweepRow run_cell(const SimConfig& base, const SweepCell& cell, double window)
{
  SimConfig cfg = base;
  cfg.topology.type = cell.topology;
  cfg.rule.rule = cell.rule;
  cfg.r_ut = cell.r_ut;
  cfg.initial = cell.point.fractions();
  cfg.master_seed = combine(base.master_seed, fnv1a(cell.key()));
  cfg.snapshot_every.reset();
  cfg.record_nodes.clear();
  cfg.probe_distances.clear();

  Eigen::VectorXd steady(cfg.runs);
  Eigen::Vector3d final_counts = Eigen::Vector3d::Zero();
  for (int r = 0; r < cfg.runs; ++r) {
    const RunRecord rec = run(cfg, r);
    steady[r] = steady_state_wealth(rec, window);
    final_counts += rec.counts.row(rec.steps()).transpose().cast<double>();
  }
  final_counts /= static_cast<double>(cfg.runs);

  SweepRow row;
  row.fractions = cfg.initial;
  row.rule = cell.rule;
  row.topology = cell.topology;
  row.r_ut = cell.r_ut;
  row.mean_w = steady.mean();
  row.std_w = cfg.runs > 1 ? std::sqrt((steady.array() - row.mean_w).square().sum() / (cfg.runs - 1)) : 0.0;
  row.mean_final = {final_counts[0], final_counts[1], final_counts[2]};
  return row;
}

std::vector<SweepRow> heatmap_sweep(const SimConfig& base, const SweepSpec& spec, int threads)
{
  const auto cells = sweep_cells(spec);
  std::vector<SweepRow> rows(cells.size());
  parallel_for(static_cast<int>(cells.size()), threads, [&](int k) {
    const auto& cell = cells[static_cast<std::size_t>(k)];
    try {
      rows[static_cast<std::size_t>(k)] = run_cell(base, cell, spec.window);
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep cell " + cell.key() + " failed: " + e.what());
    }
  });
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows)
{
  os << "f_I,f_T,f_U,rule,topology,r_UT,mean_W,std_W,mean_kI,mean_kT,mean_kU\n";
  for (const auto& r : rows) {
    os << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.fractions.investors, r.fractions.trustworthy,
                      r.fractions.untrustworthy, to_token(r.rule), to_token(r.topology), r.r_ut, r.mean_w, r.std_w,
                      r.mean_final[0], r.mean_final[1], r.mean_final[2]);
  }
}

} // namespace trustgame
