#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "trustgame/engine.hpp"

namespace trustgame
{

class CsvError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// `step,k_I,k_T,k_U,W`
void write_timeseries(std::ostream& os, const RunRecord& rec);
/// `step,node,strategy_code`
void write_snapshots(std::ostream& os, const RunRecord& rec);
/// `step,node,strategy_code` for the recorded nodes; the focal node (if any) comes first.
void write_node_series(std::ostream& os, const RunRecord& rec);
/// `run,seed,final_kI,final_kT,final_kU,steady_W`
void write_ensemble_summary(std::ostream& os, const std::vector<RunRecord>& records, double window);

struct TimeseriesData
{
  CountSeries counts;
  Eigen::VectorXd wealth;
};

TimeseriesData read_timeseries(const std::filesystem::path& path);
std::vector<Snapshot> read_snapshots(const std::filesystem::path& path, int population);

struct NodeSeriesData
{
  std::vector<NodeId> nodes;
  CodeSeries codes;
};

NodeSeriesData read_node_series(const std::filesystem::path& path);

} // namespace trustgame
