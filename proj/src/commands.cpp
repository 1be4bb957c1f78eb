#include "trustgame/commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "trustgame/analysis.hpp"
#include "trustgame/csv_io.hpp"

namespace trustgame
{

namespace fs = std::filesystem;

namespace
{

std::ofstream open_output(const fs::path& path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return os;
}

void finish(std::ofstream& os, const fs::path& path)
{
  os.flush();
  if (!os) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer)
{
  auto os = open_output(path);
  writer(os);
  finish(os, path);
}

void write_manifest(const fs::path& dir, const ProjectConfig& config)
{
  write_file(dir / "manifest.json", [&](std::ostream& os) { os << config_to_json(config).dump(2) << '\n'; });
}

void prepare(const fs::path& out)
{
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    throw std::runtime_error("cannot create output directory " + out.string());
  }
}

struct LoadedEnsemble
{
  ProjectConfig config;
  std::vector<TimeseriesData> timeseries;
  std::vector<PopulationState> final_snapshots;
  std::vector<NodeSeriesData> nodes;
};

LoadedEnsemble load_ensemble(const fs::path& dir, const std::vector<std::string>& overrides, bool snapshots,
                             bool nodes)
{
  LoadedEnsemble e{parse_config(dir / "manifest.json", overrides), {}, {}, {}};
  const int pop = e.config.sim.topology.population();
  for (int r = 0; r < e.config.sim.runs; ++r) {
    e.timeseries.push_back(read_timeseries(dir / fmt::format("timeseries_{}.csv", r)));
    if (snapshots) {
      const auto path = dir / fmt::format("snapshots_{}.csv", r);
      auto snaps = read_snapshots(path, pop);
      if (snaps.empty()) {
        throw CsvError(path.string() + ": no snapshots recorded (set snapshot_every)");
      }
      e.final_snapshots.push_back(std::move(snaps.back().state));
    }
    if (nodes) {
      e.nodes.push_back(read_node_series(dir / fmt::format("nodes_{}.csv", r)));
    }
  }
  return e;
}

std::string rule_token(const ProjectConfig& c) { return std::string(to_token(c.sim.rule.rule)); }

void require_lattice(const ProjectConfig& c, const fs::path& dir)
{
  if (c.sim.topology.type != TopologyType::Lattice) {
    throw UnsupportedTopology(dir.string() + ": spatial analyses need a lattice run");
  }
}

} // namespace

std::set<AnalysisKind> parse_analysis_kinds(const std::string& tokens)
{
  std::set<AnalysisKind> kinds;
  std::stringstream ss(tokens);
  std::string t;
  while (std::getline(ss, t, ',')) {
    if (t == "fractal") {
      kinds.insert(AnalysisKind::Fractal);
    } else if (t == "gl") {
      kinds.insert(AnalysisKind::SpatialCorrelation);
    } else if (t == "spectrum") {
      kinds.insert(AnalysisKind::Spectrum);
    } else if (t == "lagcorr") {
      kinds.insert(AnalysisKind::LagCorrelation);
    } else if (t == "all") {
      kinds.insert({AnalysisKind::Fractal, AnalysisKind::SpatialCorrelation, AnalysisKind::Spectrum,
                    AnalysisKind::LagCorrelation});
    } else {
      throw std::invalid_argument("unknown analysis '" + t + "' (expected fractal | gl | spectrum | lagcorr | all)");
    }
  }
  if (kinds.empty()) {
    throw std::invalid_argument("no analysis requested");
  }
  return kinds;
}

void cmd_run(const ProjectConfig& config, const fs::path& out, int threads)
{
  prepare(out);
  const auto records = run_ensemble(config.sim, threads);
  for (const auto& rec : records) {
    write_file(out / fmt::format("timeseries_{}.csv", rec.run_index), [&](auto& os) { write_timeseries(os, rec); });
    write_file(out / fmt::format("snapshots_{}.csv", rec.run_index), [&](auto& os) { write_snapshots(os, rec); });
    if (!rec.recorded_nodes.empty()) {
      write_file(out / fmt::format("nodes_{}.csv", rec.run_index), [&](auto& os) { write_node_series(os, rec); });
    }
  }
  write_file(out / "ensemble_summary.csv",
             [&](auto& os) { write_ensemble_summary(os, records, config.analysis.window); });
  write_manifest(out, config);
}

void cmd_sweep(const ProjectConfig& config, const fs::path& out, int threads)
{
  prepare(out);
  const auto rows = heatmap_sweep(config.sim, config.sweep_spec(), threads);
  write_file(out / "sweep.csv", [&](auto& os) { write_sweep_csv(os, rows); });
  write_manifest(out, config);
}

void cmd_analyze(const std::vector<fs::path>& inputs, const fs::path& out, const std::set<AnalysisKind>& which,
                 const std::vector<std::string>& overrides)
{
  if (inputs.empty()) {
    throw std::invalid_argument("analyze needs at least one --in run directory");
  }
  prepare(out);
  const bool want_fractal = which.contains(AnalysisKind::Fractal);
  const bool want_gl = which.contains(AnalysisKind::SpatialCorrelation);
  const bool want_spectrum = which.contains(AnalysisKind::Spectrum);
  const bool want_lag = which.contains(AnalysisKind::LagCorrelation);

  std::ostringstream fractal, gl, spectrum, lag;
  fractal << "r_UT,rule,strategy,a\n";
  gl << "l,rule,G\n";
  spectrum << "freq,power,rule\n";
  lag << "distance,lag,rho,rule\n";
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  for (const auto& dir : inputs) {
    const auto e = load_ensemble(dir, overrides, want_fractal || want_gl, want_lag);
    const auto& cfg = e.config;
    const auto rule = rule_token(cfg);

    if (want_fractal) {
      require_lattice(cfg, dir);
      const int side = cfg.sim.topology.side;
      const auto sides = cfg.analysis.box_sides.empty() ? default_box_sides(side) : cfg.analysis.box_sides;
      for (Strategy s : kStrategies) {
        double a = nan;
        try {
          a = fit_power_exponent(mean_mass_scaling(e.final_snapshots, side, s, sides));
        } catch (const InsufficientData&) {
        }
        fractal << fmt::format("{},{},{},{}\n", cfg.sim.r_ut, rule, to_token(s), a);
      }
    }

    if (want_gl) {
      require_lattice(cfg, dir);
      const Network net = build_lattice(cfg.sim.topology.side);
      std::vector<int> ls = cfg.analysis.gl_distances;
      if (ls.empty()) {
        for (int l = 1; l <= cfg.sim.topology.side; ++l) {
          ls.push_back(l);
        }
      }
      for (int l : ls) {
        if (pairs_at_distance(net, l).count() == 0) {
          continue;
        }
        double sum = 0.0;
        for (const auto& snap : e.final_snapshots) {
          sum += spatial_correlation(snap, l, net);
        }
        gl << fmt::format("{},{},{}\n", l, rule, sum / static_cast<double>(e.final_snapshots.size()));
      }
    }

    if (want_spectrum) {
      std::vector<Eigen::VectorXd> series;
      for (const auto& ts : e.timeseries) {
        const int steps = static_cast<int>(ts.wealth.size()) - 1;
        const int len = tail_length(steps, cfg.analysis.tail_fraction);
        series.emplace_back(ts.counts.col(0).tail(len).cast<double>());
      }
      const Spectrum spec = mean_periodogram(series);
      for (Eigen::Index k = 0; k < spec.frequency.size(); ++k) {
        spectrum << fmt::format("{},{},{}\n", spec.frequency[k], spec.power[k], rule);
      }
    }

    if (want_lag) {
      require_lattice(cfg, dir);
      const Network net = build_lattice(cfg.sim.topology.side);
      // distance -> per-lag (sum, count) of defined correlations
      std::map<int, std::vector<std::pair<double, int>>> acc;
      const int max_lag = cfg.analysis.max_lag;
      for (const auto& ns : e.nodes) {
        if (ns.nodes.size() < 2) {
          throw CsvError(dir.string() + ": node series need a focal node and at least one probe");
        }
        const auto rows = ns.codes.rows();
        const int len = tail_length(static_cast<int>(rows) - 1, cfg.analysis.tail_fraction);
        const Eigen::VectorXd focal = ns.codes.col(0).tail(len).cast<double>();
        for (std::size_t k = 1; k < ns.nodes.size(); ++k) {
          const int d = lattice_distance(net, ns.nodes[0], ns.nodes[k]);
          const Eigen::VectorXd probe = ns.codes.col(static_cast<Eigen::Index>(k)).tail(len).cast<double>();
          const auto lc = lagged_pearson(focal, probe, max_lag);
          auto& slot = acc[d];
          slot.resize(static_cast<std::size_t>(max_lag) + 1, {0.0, 0});
          for (std::size_t j = 0; j < lc.rho.size(); ++j) {
            if (lc.rho[j]) {
              slot[j].first += *lc.rho[j];
              ++slot[j].second;
            }
          }
        }
      }
      for (const auto& [d, slot] : acc) {
        for (std::size_t j = 0; j < slot.size(); ++j) {
          const double rho = slot[j].second > 0 ? slot[j].first / slot[j].second : nan;
          lag << fmt::format("{},{},{},{}\n", d, j, rho, rule);
        }
      }
    }
  }

  auto emit = [&](bool wanted, const char* name, const std::ostringstream& body) {
    if (wanted) {
      write_file(out / name, [&](auto& os) { os << body.str(); });
    }
  };
  emit(want_fractal, "fractal.csv", fractal);
  emit(want_gl, "gl.csv", gl);
  emit(want_spectrum, "spectrum.csv", spectrum);
  emit(want_lag, "lagcorr.csv", lag);
}

} // namespace trustgame
