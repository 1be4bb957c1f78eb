#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "trustgame/engine.hpp"

namespace trustgame
{

/// A point of the initial-condition simplex, stored as integer multiples of
/// the grid step so cell keys stay exact.
struct GridPoint
{
  int investors;
  int trustworthy;
  int untrustworthy;
  int divisions;

  InitialFractions fractions() const;
};

/// All (f_I, f_T, f_U) with components non-negative multiples of `step` summing to 1.
std::vector<GridPoint> initial_condition_grid(double step);

struct SweepCell
{
  TopologyType topology;
  Rule rule;
  double r_ut;
  GridPoint point;

  std::string key() const;
};

struct SweepRow
{
  InitialFractions fractions;
  Rule rule;
  TopologyType topology;
  double r_ut;
  double mean_w;
  double std_w;
  std::array<double, 3> mean_final{};
};

struct SweepSpec
{
  std::vector<GridPoint> grid;
  std::vector<Rule> rules;
  std::vector<TopologyType> topologies;
  std::vector<double> r_ut_values;
  double window = 0.25;
};

/// Cells in canonical order: topology, rule, r_UT, f_I, f_T.
std::vector<SweepCell> sweep_cells(const SweepSpec& spec);

/// One row per cell. Each cell's runs are seeded from (master seed, cell key).
std::vector<SweepRow> heatmap_sweep(const SimConfig& base, const SweepSpec& spec, int threads = 1);

SweepRow run_cell(const SimConfig& base, const SweepCell& cell, double window);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

} // namespace trustgame
