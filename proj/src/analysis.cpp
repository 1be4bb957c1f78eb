#include "trustgame/analysis.hpp"

#include <algorithm>
#include <complex>
#include <string>

#include <unsupported/Eigen/FFT>

namespace trustgame
{

int tail_length(int steps, double window_frac)
{
  if (!(window_frac > 0.0 && window_frac <= 1.0)) {
    throw std::invalid_argument("window fraction must lie in (0,1], got " + std::to_string(window_frac));
  }
  const int len = static_cast<int>(std::ceil(window_frac * steps - 1e-9));
  if (len < 1) {
    throw std::invalid_argument("steady-state window is empty");
  }
  return len;
}

double steady_state_wealth(const RunRecord& record, double window_frac) { return tail_mean(record.wealth, window_frac); }

std::vector<int> default_box_sides(int side)
{
  std::vector<int> sides;
  for (int l = 1; l <= std::max(1, side / 2); ++l) {
    sides.push_back(l);
  }
  return sides;
}

MassScalingCurve mass_scaling(std::span<const Strategy> snapshot, int side, Strategy target,
                              std::span<const int> box_sides, BoxAnchoring anchoring)
{
  if (static_cast<std::size_t>(side) * side != snapshot.size()) {
    throw std::invalid_argument("snapshot size does not match lattice side");
  }
  for (int l : box_sides) {
    if (l < 1 || l > side) {
      throw std::invalid_argument("box side must lie in [1, " + std::to_string(side) + "], got " + std::to_string(l));
    }
  }
  // Prefix sums over the lattice tiled 2x2 so any wrapped box is one rectangle.
  const int tiled = 2 * side;
  Eigen::ArrayXXd prefix = Eigen::ArrayXXd::Zero(tiled + 1, tiled + 1);
  for (int r = 0; r < tiled; ++r) {
    for (int c = 0; c < tiled; ++c) {
      const double hit = snapshot[static_cast<std::size_t>((r % side) * side + c % side)] == target ? 1.0 : 0.0;
      prefix(r + 1, c + 1) = hit + prefix(r, c + 1) + prefix(r + 1, c) - prefix(r, c);
    }
  }
  auto box = [&](int r0, int c0, int l) {
    return prefix(r0 + l, c0 + l) - prefix(r0, c0 + l) - prefix(r0 + l, c0) + prefix(r0, c0);
  };

  MassScalingCurve curve;
  curve.box_sides.assign(box_sides.begin(), box_sides.end());
  curve.mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(box_sides.size()));
  for (std::size_t k = 0; k < box_sides.size(); ++k) {
    const int l = box_sides[k];
    const int back = (l - 1) / 2;
    double total = 0.0;
    std::int64_t anchors = 0;
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c) {
        if (anchoring == BoxAnchoring::TargetSites) {
          if (snapshot[static_cast<std::size_t>(r * side + c)] != target) {
            continue;
          }
          total += box((r - back + side) % side, (c - back + side) % side, l);
        } else {
          total += box(r, c, l);
        }
        ++anchors;
      }
    }
    curve.mass[static_cast<Eigen::Index>(k)] = anchors > 0 ? total / static_cast<double>(anchors) : 0.0;
  }
  return curve;
}

double fit_power_exponent(const MassScalingCurve& curve)
{
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXi>(curve.box_sides.data(),
                                                              static_cast<Eigen::Index>(curve.box_sides.size()))
                                .cast<double>();
  return fit_power_exponent(x, curve.mass);
}

double spatial_correlation(std::span<const Strategy> snapshot, int l, const Network& net)
{
  if (static_cast<NodeId>(snapshot.size()) != net.size()) {
    throw std::invalid_argument("snapshot size does not match network size");
  }
  const PairsAtDistance pairs(net, l);
  if (pairs.count() == 0) {
    throw InsufficientData("no node pairs at distance " + std::to_string(l));
  }
  double sum = 0.0;
  pairs.for_each([&](NodeId i, NodeId j) {
    const int d = code(snapshot[static_cast<std::size_t>(i)]) - code(snapshot[static_cast<std::size_t>(j)]);
    sum += d * d;
  });
  return sum / static_cast<double>(pairs.count());
}

Spectrum periodogram(const Eigen::Ref<const Eigen::VectorXd>& series)
{
  const Eigen::Index n = series.size();
  if (n < 2) {
    throw std::invalid_argument("periodogram needs at least 2 samples");
  }
  std::vector<double> centered(static_cast<std::size_t>(n));
  Eigen::Map<Eigen::VectorXd>(centered.data(), n) = series.array() - series.mean();

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> bins;
  fft.fwd(bins, centered);

  const Eigen::Index half = n / 2;
  Spectrum spec;
  spec.frequency.resize(half + 1);
  spec.power.resize(half + 1);
  const auto dn = static_cast<double>(n);
  for (Eigen::Index k = 0; k <= half; ++k) {
    const bool unpaired = k == 0 || (n % 2 == 0 && k == half);
    spec.frequency[k] = static_cast<double>(k) / dn;
    spec.power[k] = (unpaired ? 1.0 : 2.0) * std::norm(bins[static_cast<std::size_t>(k)]) / dn;
  }
  return spec;
}

Spectrum mean_periodogram(std::span<const Eigen::VectorXd> series)
{
  if (series.empty()) {
    throw InsufficientData("mean periodogram needs at least one series");
  }
  Spectrum mean = periodogram(series.front());
  for (std::size_t k = 1; k < series.size(); ++k) {
    if (series[k].size() != series.front().size()) {
      throw std::invalid_argument("mean periodogram needs equal-length series");
    }
    mean.power += periodogram(series[k]).power;
  }
  mean.power /= static_cast<double>(series.size());
  return mean;
}

LogLogFit spectrum_loglog_slope(const Spectrum& spec, double f_min)
{
  std::vector<double> f;
  std::vector<double> p;
  for (Eigen::Index k = 0; k < spec.frequency.size(); ++k) {
    const double fk = spec.frequency[k];
    if (fk >= f_min && fk < 0.5 && fk > 0.0 && spec.power[k] > 0.0) {
      f.push_back(fk);
      p.push_back(spec.power[k]);
    }
  }
  if (f.size() < 8) {
    throw InsufficientData("spectral slope needs at least 8 positive bins above f_min, got " + std::to_string(f.size()));
  }
  const auto n = static_cast<Eigen::Index>(f.size());
  return fit_loglog(Eigen::Map<const Eigen::VectorXd>(f.data(), n), Eigen::Map<const Eigen::VectorXd>(p.data(), n), 8);
}

Eigen::Index peak_bin(const Spectrum& spec)
{
  Eigen::Index k = 0;
  spec.power.maxCoeff(&k);
  return k;
}

LagCorrelation lagged_pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                              int max_lag)
{
  if (max_lag < 0) {
    throw std::invalid_argument("max_lag must be non-negative");
  }
  if (a.size() != b.size()) {
    throw std::invalid_argument("lagged_pearson: series differ in length");
  }
  if (a.size() < max_lag + 2) {
    throw std::invalid_argument("lagged_pearson: series shorter than max_lag + 2");
  }
  LagCorrelation out;
  for (int lag = 0; lag <= max_lag; ++lag) {
    const Eigen::Index len = a.size() - lag;
    const Eigen::VectorXd x = a.head(len).array() - a.head(len).mean();
    const Eigen::VectorXd y = b.segment(lag, len).array() - b.segment(lag, len).mean();
    const double sxx = x.squaredNorm();
    const double syy = y.squaredNorm();
    out.lags.push_back(lag);
    if (sxx <= 0.0 || syy <= 0.0) {
      out.rho.emplace_back(std::nullopt);
    } else {
      out.rho.emplace_back(std::clamp(x.dot(y) / std::sqrt(sxx * syy), -1.0, 1.0));
    }
  }
  return out;
}

std::vector<NodeId> select_probe_nodes(const Network& net, NodeId focal, std::span<const int> distances, Rng& rng)
{
  const int side = net.side();
  if (focal < 0 || focal >= net.size()) {
    throw std::invalid_argument("focal node out of range");
  }
  std::vector<NodeId> probes;
  std::vector<NodeId> candidates;
  for (int d : distances) {
    candidates.clear();
    for (NodeId j = 0; j < net.size(); ++j) {
      if (j != focal && lattice_distance(net, focal, j) == d) {
        candidates.push_back(j);
      }
    }
    if (candidates.empty()) {
      throw std::invalid_argument("no node at distance " + std::to_string(d) + " on a lattice of side " +
                                  std::to_string(side));
    }
    probes.push_back(candidates[rng.below(candidates.size())]);
  }
  return probes;
}

} // namespace trustgame

namespace trustgame
{

MassScalingCurve mean_mass_scaling(std::span<const PopulationState> snapshots, int side, Strategy target,
                                   std::span<const int> box_sides, BoxAnchoring anchoring)
{
  if (snapshots.empty()) {
    throw InsufficientData("mass scaling needs at least one snapshot");
  }
  MassScalingCurve mean = mass_scaling(snapshots.front(), side, target, box_sides, anchoring);
  for (std::size_t k = 1; k < snapshots.size(); ++k) {
    mean.mass += mass_scaling(snapshots[k], side, target, box_sides, anchoring).mass;
  }
  mean.mass /= static_cast<double>(snapshots.size());
  return mean;
}

} // namespace trustgame
