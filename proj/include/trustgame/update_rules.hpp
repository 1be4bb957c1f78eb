#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "trustgame/game.hpp"
#include "trustgame/network.hpp"
#include "trustgame/random.hpp"

namespace trustgame
{

enum class Rule { UI, UI_VM, MORAN, PROP };

std::string_view to_token(Rule rule) noexcept;
std::optional<Rule> rule_from_token(std::string_view token) noexcept;

struct UpdateRuleConfig
{
  Rule rule = Rule::UI;
  double q = 0.1; ///< voter-model probability, UI_VM only

  void validate() const;
};

/// Read-only view of the previous step that every rule decides against.
struct FrozenStep
{
  const Network& net;
  std::span<const Strategy> state;
  const WealthVector& payoffs;
};

/// Copy the best neighbor if it strictly beats the focal agent.
/// Draws from `rng` only to break ties among co-maximal neighbors.
Strategy ui_update(NodeId i, const FrozenStep& prev, Rng& rng);

/// Voter model with probability q, unconditional imitation otherwise.
Strategy ui_vm_update(NodeId i, const FrozenStep& prev, Rng& rng, double q);

/// Local Moran step over the closed neighborhood with weights w + 1.
Strategy moran_update(NodeId i, const FrozenStep& prev, Rng& rng);

/// Normalized Moran sampling probabilities, focal agent first then neighbors in adjacency order.
std::vector<double> moran_probabilities(NodeId i, const FrozenStep& prev);

/// Proportional imitation of one uniformly chosen neighbor.
Strategy prop_update(NodeId i, const FrozenStep& prev, const GameParams& params, Rng& rng);

/// Largest possible payoff gap between two agents of degrees k_i and k_j.
double phi(const GameParams& params, int k_i, int k_j) noexcept;

Strategy apply_rule(const UpdateRuleConfig& rule, NodeId i, const FrozenStep& prev, const GameParams& params, Rng& rng);

} // namespace trustgame
