#include "trustgame/update_rules.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace trustgame
{

namespace
{

// Shifted Moran fitness. The smallest payoff any agent can earn is -1.
constexpr double kMinPayoff = -1.0;

double moran_weight(double w) { return std::max(0.0, w - kMinPayoff); }

Strategy at(const FrozenStep& prev, NodeId j) { return prev.state[static_cast<std::size_t>(j)]; }

} // namespace

std::string_view to_token(Rule rule) noexcept
{
  switch (rule) {
  case Rule::UI:
    return "ui";
  case Rule::UI_VM:
    return "ui_vm";
  case Rule::MORAN:
    return "moran";
  case Rule::PROP:
    return "prop";
  }
  return "?";
}

std::optional<Rule> rule_from_token(std::string_view token) noexcept
{
  for (Rule r : {Rule::UI, Rule::UI_VM, Rule::MORAN, Rule::PROP}) {
    if (token == to_token(r)) {
      return r;
    }
  }
  return std::nullopt;
}

void UpdateRuleConfig::validate() const
{
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("q must lie in [0,1], got " + std::to_string(q));
  }
}

Strategy ui_update(NodeId i, const FrozenStep& prev, Rng& rng)
{
  const auto nbrs = prev.net.neighbors(i);
  double best = prev.payoffs[i];
  int ties = 0;
  for (NodeId j : nbrs) {
    const double wj = prev.payoffs[j];
    if (wj > best) {
      best = wj;
      ties = 1;
    } else if (ties > 0 && wj == best) {
      ++ties;
    }
  }
  if (ties == 0) {
    return at(prev, i);
  }
  std::uint64_t pick = ties > 1 ? rng.below(static_cast<std::uint64_t>(ties)) : 0;
  for (NodeId j : nbrs) {
    if (prev.payoffs[j] == best) {
      if (pick == 0) {
        return at(prev, j);
      }
      --pick;
    }
  }
  return at(prev, i);
}

Strategy ui_vm_update(NodeId i, const FrozenStep& prev, Rng& rng, double q)
{
  const auto nbrs = prev.net.neighbors(i);
  if (q <= 0.0 || nbrs.empty()) {
    return ui_update(i, prev, rng);
  }
  if (q >= 1.0 || rng.uniform() < q) {
    return at(prev, nbrs[rng.below(nbrs.size())]);
  }
  return ui_update(i, prev, rng);
}

std::vector<double> moran_probabilities(NodeId i, const FrozenStep& prev)
{
  const auto nbrs = prev.net.neighbors(i);
  std::vector<double> p;
  p.reserve(nbrs.size() + 1);
  p.push_back(moran_weight(prev.payoffs[i]));
  for (NodeId j : nbrs) {
    p.push_back(moran_weight(prev.payoffs[j]));
  }
  double total = 0.0;
  for (double x : p) {
    total += x;
  }
  if (total <= 0.0) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
  } else {
    for (double& x : p) {
      x /= total;
    }
  }
  return p;
}

Strategy moran_update(NodeId i, const FrozenStep& prev, Rng& rng)
{
  const auto nbrs = prev.net.neighbors(i);
  double total = moran_weight(prev.payoffs[i]);
  for (NodeId j : nbrs) {
    total += moran_weight(prev.payoffs[j]);
  }
  if (total <= 0.0) {
    const auto k = rng.below(nbrs.size() + 1);
    return k == 0 ? at(prev, i) : at(prev, nbrs[k - 1]);
  }
  const double target = rng.uniform() * total;
  double acc = moran_weight(prev.payoffs[i]);
  if (target < acc) {
    return at(prev, i);
  }
  for (NodeId j : nbrs) {
    const double wj = moran_weight(prev.payoffs[j]);
    acc += wj;
    if (target < acc && wj > 0.0) {
      return at(prev, j);
    }
  }
  // Rounding left target at the top edge; take the last candidate with weight.
  for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it) {
    if (moran_weight(prev.payoffs[*it]) > 0.0) {
      return at(prev, *it);
    }
  }
  return at(prev, i);
}

double phi(const GameParams& params, int k_i, int k_j) noexcept
{
  const double max_w = (1.0 + params.r_ut()) * params.r_t() * std::max(k_i, k_j);
  return max_w - kMinPayoff;
}

Strategy prop_update(NodeId i, const FrozenStep& prev, const GameParams& params, Rng& rng)
{
  const auto nbrs = prev.net.neighbors(i);
  if (nbrs.empty()) {
    return at(prev, i);
  }
  const NodeId j = nbrs[rng.below(nbrs.size())];
  const double gain = prev.payoffs[j] - prev.payoffs[i];
  if (gain <= 0.0) {
    return at(prev, i);
  }
  const double p = gain / phi(params, prev.net.degree(i), prev.net.degree(j));
  return rng.uniform() < p ? at(prev, j) : at(prev, i);
}

Strategy apply_rule(const UpdateRuleConfig& rule, NodeId i, const FrozenStep& prev, const GameParams& params, Rng& rng)
{
  switch (rule.rule) {
  case Rule::UI:
    return ui_update(i, prev, rng);
  case Rule::UI_VM:
    return ui_vm_update(i, prev, rng, rule.q);
  case Rule::MORAN:
    return moran_update(i, prev, rng);
  case Rule::PROP:
    return prop_update(i, prev, params, rng);
  }
  return at(prev, i);
}

} // namespace trustgame
