#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "trustgame/config.hpp"

namespace trustgame
{

enum class AnalysisKind { Fractal, SpatialCorrelation, Spectrum, LagCorrelation };

/// Parses `fractal | gl | spectrum | lagcorr | all`, comma separated.
std::set<AnalysisKind> parse_analysis_kinds(const std::string& tokens);

/// Runs the ensemble and writes timeseries_<r>.csv, snapshots_<r>.csv,
/// nodes_<r>.csv (when nodes are recorded), ensemble_summary.csv and manifest.json.
void cmd_run(const ProjectConfig& config, const std::filesystem::path& out, int threads);

/// Writes sweep.csv and manifest.json.
void cmd_sweep(const ProjectConfig& config, const std::filesystem::path& out, int threads);

/// Reads run directories written by cmd_run and writes fractal.csv, gl.csv,
/// spectrum.csv and/or lagcorr.csv into `out`.
void cmd_analyze(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out,
                 const std::set<AnalysisKind>& which, const std::vector<std::string>& overrides);

} // namespace trustgame
