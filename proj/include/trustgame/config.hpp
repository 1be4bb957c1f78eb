#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "trustgame/engine.hpp"
#include "trustgame/sweep.hpp"

namespace trustgame
{

/// Configuration problem attributed to one key.
class ConfigError : public std::runtime_error
{
public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key))
  {
  }
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

struct SweepOptions
{
  double grid_step = 0.05;
  std::vector<Rule> rules{Rule::UI, Rule::UI_VM, Rule::MORAN, Rule::PROP};
  std::vector<TopologyType> topologies{TopologyType::Lattice, TopologyType::ScaleFree};
  std::vector<double> r_ut_values{0.11, 0.33, 0.66};
};

struct AnalysisOptions
{
  double window = 0.25;           ///< wealth averaging window
  double tail_fraction = 0.5;     ///< steady-state window for spectra and node series
  int max_lag = 20;
  double f_min = 0.004;
  std::vector<int> box_sides;     ///< empty means 1..side/2
  std::vector<int> gl_distances;  ///< empty means 1..side
};

struct ProjectConfig
{
  SimConfig sim;
  SweepOptions sweep;
  AnalysisOptions analysis;

  SweepSpec sweep_spec() const;
};

/// Flat JSON object -> validated config. Unknown keys are rejected.
ProjectConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ProjectConfig& config);

/// Applies one `key=value` override. The value is read as JSON when it
/// parses, otherwise as a bare string.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// Loads the file (if a path is given), applies overrides in order, then validates.
ProjectConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);
ProjectConfig parse_config(nlohmann::json j, const std::vector<std::string>& overrides);

} // namespace trustgame
