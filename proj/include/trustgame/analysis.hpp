#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "trustgame/engine.hpp"
#include "trustgame/game.hpp"
#include "trustgame/network.hpp"

namespace trustgame
{

class InsufficientData : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Steady-state averages

/// Number of trailing samples covered by a fraction of `steps`.
int tail_length(int steps, double window_frac);

/// Mean of the final ceil(window_frac * (n - 1)) entries of a series whose
/// first entry is the t = 0 sample.
template <typename Derived>
double tail_mean(const Eigen::DenseBase<Derived>& series, double window_frac)
{
  const int steps = static_cast<int>(series.size()) - 1;
  const int len = tail_length(steps, window_frac);
  return static_cast<double>(series.tail(len).template cast<double>().mean());
}

/// Mean global net wealth over the trailing window.
double steady_state_wealth(const RunRecord& record, double window_frac);

// ---------------------------------------------------------------------------
// Mass scaling

/// Where the L x L boxes are placed.
enum class BoxAnchoring {
  /// One box centered on every site holding the target strategy.
  TargetSites,
  /// One box at every toroidal position. M(L) then reduces to density * L^2.
  AllSites,
};

struct MassScalingCurve
{
  std::vector<int> box_sides;
  Eigen::VectorXd mass;
};

MassScalingCurve mass_scaling(std::span<const Strategy> snapshot, int side, Strategy target,
                              std::span<const int> box_sides,
                              BoxAnchoring anchoring = BoxAnchoring::TargetSites);

/// Box sides 1..side/2.
std::vector<int> default_box_sides(int side);

struct LogLogFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  int points = 0;
};

/// Ordinary least squares of ln(y) on ln(x); non-positive points are dropped.
template <typename DerivedX, typename DerivedY>
LogLogFit fit_loglog(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y, int min_points = 2)
{
  if (x.size() != y.size()) {
    throw std::invalid_argument("fit_loglog: x and y differ in length");
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double xv = static_cast<double>(x(k));
    const double yv = static_cast<double>(y(k));
    if (xv > 0.0 && yv > 0.0) {
      lx.push_back(std::log(xv));
      ly.push_back(std::log(yv));
    }
  }
  const auto n = static_cast<Eigen::Index>(lx.size());
  if (n < min_points || n < 2) {
    throw InsufficientData("log-log fit needs at least " + std::to_string(std::max(min_points, 2)) +
                           " positive points, got " + std::to_string(n));
  }
  const Eigen::Map<const Eigen::VectorXd> u(lx.data(), n);
  const Eigen::Map<const Eigen::VectorXd> v(ly.data(), n);
  const Eigen::VectorXd du = u.array() - u.mean();
  const Eigen::VectorXd dv = v.array() - v.mean();
  const double sxx = du.squaredNorm();
  if (sxx <= 0.0) {
    throw InsufficientData("log-log fit needs at least two distinct x values");
  }
  LogLogFit fit;
  fit.points = static_cast<int>(n);
  fit.slope = du.dot(dv) / sxx;
  fit.intercept = v.mean() - fit.slope * u.mean();
  const double syy = dv.squaredNorm();
  const double ssr = (dv - fit.slope * du).squaredNorm();
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  fit.slope_stderr = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

/// Exponent a of y = c * x^a.
template <typename DerivedX, typename DerivedY>
double fit_power_exponent(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y)
{
  return fit_loglog(x, y).slope;
}

double fit_power_exponent(const MassScalingCurve& curve);

/// Anchor-averaged mass curve pooled over several snapshots of one lattice.
MassScalingCurve mean_mass_scaling(std::span<const PopulationState> snapshots, int side, Strategy target,
                                   std::span<const int> box_sides,
                                   BoxAnchoring anchoring = BoxAnchoring::TargetSites);

// ---------------------------------------------------------------------------
// Spatial correlation

/// Mean squared strategy-code difference over all pairs at torus L1 distance l.
double spatial_correlation(std::span<const Strategy> snapshot, int l, const Network& net);

// ---------------------------------------------------------------------------
// Spectra

struct Spectrum
{
  Eigen::VectorXd frequency; ///< cycles per step, k / N for k = 0..N/2
  Eigen::VectorXd power;
};

/// One-sided periodogram of the mean-removed series, normalized so the bins
/// sum to the series' sum of squared deviations.
Spectrum periodogram(const Eigen::Ref<const Eigen::VectorXd>& series);

/// Bin-wise mean of periodograms of equal-length series.
Spectrum mean_periodogram(std::span<const Eigen::VectorXd> series);

/// Log-log fit of power against frequency over [f_min, 0.5).
LogLogFit spectrum_loglog_slope(const Spectrum& spec, double f_min);

/// Index of the largest power bin.
Eigen::Index peak_bin(const Spectrum& spec);

// ---------------------------------------------------------------------------
// Spatio-temporal correlation

struct LagCorrelation
{
  std::vector<int> lags;
  std::vector<std::optional<double>> rho; ///< empty where either window is constant
};

/// Pearson correlation of (a_t, b_{t + lag}) for lag = 0..max_lag.
LagCorrelation lagged_pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                              int max_lag);

/// One uniformly chosen node at each requested distance from `focal`.
std::vector<NodeId> select_probe_nodes(const Network& net, NodeId focal, std::span<const int> distances, Rng& rng);

} // namespace trustgame
