#include "trustgame/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <string_view>

#include <fmt/format.h>

#include "trustgame/analysis.hpp"

namespace trustgame
{

void write_timeseries(std::ostream& os, const RunRecord& rec)
{
  os << "step,k_I,k_T,k_U,W\n";
  for (Eigen::Index t = 0; t < rec.wealth.size(); ++t) {
    os << fmt::format("{},{},{},{},{}\n", t, rec.counts(t, 0), rec.counts(t, 1), rec.counts(t, 2), rec.wealth[t]);
  }
}

void write_snapshots(std::ostream& os, const RunRecord& rec)
{
  os << "step,node,strategy_code\n";
  for (const auto& snap : rec.snapshots) {
    for (std::size_t i = 0; i < snap.state.size(); ++i) {
      os << fmt::format("{},{},{}\n", snap.step, i, code(snap.state[i]));
    }
  }
}

void write_node_series(std::ostream& os, const RunRecord& rec)
{
  os << "step,node,strategy_code\n";
  for (Eigen::Index t = 0; t < rec.node_series.rows(); ++t) {
    for (std::size_t k = 0; k < rec.recorded_nodes.size(); ++k) {
      os << fmt::format("{},{},{}\n", t, rec.recorded_nodes[k],
                        static_cast<int>(rec.node_series(t, static_cast<Eigen::Index>(k))));
    }
  }
}

void write_ensemble_summary(std::ostream& os, const std::vector<RunRecord>& records, double window)
{
  os << "run,seed,final_kI,final_kT,final_kU,steady_W\n";
  for (const auto& rec : records) {
    const auto t = rec.steps();
    os << fmt::format("{},{},{},{},{},{}\n", rec.run_index, rec.seed, rec.counts(t, 0), rec.counts(t, 1),
                      rec.counts(t, 2), steady_state_wealth(rec, window));
  }
}

namespace
{

class CsvReader
{
public:
  CsvReader(const std::filesystem::path& path, std::string_view header) : path_(path), in_(path)
  {
    if (!in_) {
      throw CsvError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in_, line) || line != header) {
      throw CsvError(fmt::format("{}: row 1: expected header '{}'", path.string(), header));
    }
    columns_ = 1 + static_cast<std::size_t>(std::count(header.begin(), header.end(), ','));
  }

  bool next()
  {
    if (!std::getline(in_, line_)) {
      return false;
    }
    ++row_;
    fields_.clear();
    std::string_view rest(line_);
    for (;;) {
      const auto comma = rest.find(',');
      fields_.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) {
        break;
      }
      rest.remove_prefix(comma + 1);
    }
    if (fields_.size() != columns_) {
      fail(fmt::format("expected {} fields, got {}", columns_, fields_.size()));
    }
    return true;
  }

  template <typename T>
  T get(std::size_t k) const
  {
    const auto f = fields_[k];
    T value{};
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      fail(fmt::format("field {} ('{}') is not a valid number", k + 1, f));
    }
    return value;
  }

  [[noreturn]] void fail(const std::string& what) const
  {
    throw CsvError(fmt::format("{}: row {}: {}", path_.string(), row_ + 1, what));
  }

private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::string line_;
  std::vector<std::string_view> fields_;
  std::size_t columns_ = 0;
  std::size_t row_ = 0;
};

} // namespace

TimeseriesData read_timeseries(const std::filesystem::path& path)
{
  CsvReader csv(path, "step,k_I,k_T,k_U,W");
  std::vector<std::array<std::int64_t, 3>> counts;
  std::vector<double> wealth;
  while (csv.next()) {
    if (csv.get<std::int64_t>(0) != static_cast<std::int64_t>(counts.size())) {
      csv.fail("steps must be consecutive from 0");
    }
    counts.push_back({csv.get<std::int64_t>(1), csv.get<std::int64_t>(2), csv.get<std::int64_t>(3)});
    wealth.push_back(csv.get<double>(4));
  }
  TimeseriesData data;
  const auto n = static_cast<Eigen::Index>(counts.size());
  data.counts.resize(n, 3);
  data.wealth.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (int s = 0; s < 3; ++s) {
      data.counts(t, s) = counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
    }
    data.wealth[t] = wealth[static_cast<std::size_t>(t)];
  }
  return data;
}

std::vector<Snapshot> read_snapshots(const std::filesystem::path& path, int population)
{
  CsvReader csv(path, "step,node,strategy_code");
  std::vector<Snapshot> snaps;
  while (csv.next()) {
    const int step = csv.get<int>(0);
    const int node = csv.get<int>(1);
    const auto s = strategy_from_code(csv.get<int>(2));
    if (!s) {
      csv.fail("strategy_code must be 1, 2 or 3");
    }
    if (snaps.empty() || snaps.back().step != step) {
      if (!snaps.empty() && static_cast<int>(snaps.back().state.size()) != population) {
        csv.fail("previous snapshot is incomplete");
      }
      snaps.push_back({step, {}});
      snaps.back().state.reserve(static_cast<std::size_t>(population));
    }
    if (node != static_cast<int>(snaps.back().state.size()) || node >= population) {
      csv.fail("nodes must be listed in order 0..population-1");
    }
    snaps.back().state.push_back(*s);
  }
  if (!snaps.empty() && static_cast<int>(snaps.back().state.size()) != population) {
    throw CsvError(path.string() + ": last snapshot is incomplete");
  }
  return snaps;
}

NodeSeriesData read_node_series(const std::filesystem::path& path)
{
  CsvReader csv(path, "step,node,strategy_code");
  NodeSeriesData data;
  std::vector<std::vector<std::int8_t>> rows;
  std::size_t column = 0;
  while (csv.next()) {
    const int step = csv.get<int>(0);
    const auto node = csv.get<NodeId>(1);
    const int c = csv.get<int>(2);
    if (!strategy_from_code(c)) {
      csv.fail("strategy_code must be 1, 2 or 3");
    }
    if (step == static_cast<int>(rows.size())) {
      if (!rows.empty() && column != data.nodes.size()) {
        csv.fail("previous step is missing nodes");
      }
      rows.emplace_back();
      column = 0;
    } else if (step != static_cast<int>(rows.size()) - 1) {
      csv.fail("steps must be consecutive from 0");
    }
    if (step == 0) {
      data.nodes.push_back(node);
    } else if (column >= data.nodes.size() || data.nodes[column] != node) {
      csv.fail("node order differs from step 0");
    }
    rows.back().push_back(static_cast<std::int8_t>(c));
    ++column;
  }
  data.codes.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(data.nodes.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t].size() != data.nodes.size()) {
      throw CsvError(path.string() + ": step " + std::to_string(t) + " is missing nodes");
    }
    for (std::size_t k = 0; k < rows[t].size(); ++k) {
      data.codes(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = rows[t][k];
    }
  }
  return data;
}

} // namespace trustgame
