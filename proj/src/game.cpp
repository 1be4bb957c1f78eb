#include "trustgame/game.hpp"

#include <stdexcept>
#include <string>

namespace trustgame
{

std::optional<Strategy> strategy_from_code(int c) noexcept
{
  if (c < 1 || c > 3) {
    return std::nullopt;
  }
  return static_cast<Strategy>(c);
}

std::string_view to_token(Strategy s) noexcept
{
  switch (s) {
  case Strategy::I:
    return "I";
  case Strategy::T:
    return "T";
  case Strategy::U:
    return "U";
  }
  return "?";
}

std::optional<Strategy> strategy_from_token(std::string_view token) noexcept
{
  for (Strategy s : kStrategies) {
    if (token == to_token(s)) {
      return s;
    }
  }
  return std::nullopt;
}

GameParams::GameParams(double r_t, double r_ut) : r_t_(r_t), r_ut_(r_ut)
{
  if (!(r_t > 1.0)) {
    throw std::invalid_argument("R_T must be > 1, got " + std::to_string(r_t));
  }
  if (!(r_ut > 0.0 && r_ut < 1.0)) {
    throw std::invalid_argument("r_UT must lie in (0,1), got " + std::to_string(r_ut));
  }
}

NeighborhoodCounts local_counts(const Network& net, std::span<const Strategy> state, NodeId i)
{
  std::array<int, 3> k{};
  ++k[index(state[static_cast<std::size_t>(i)])];
  for (NodeId j : net.neighbors(i)) {
    ++k[index(state[static_cast<std::size_t>(j)])];
  }
  return {k[0], k[1], k[2]};
}

double payoff(const GameParams& params, const NeighborhoodCounts& counts, Strategy s) noexcept
{
  const int trustees = counts.trustees();
  if (trustees == 0) {
    return 0.0;
  }
  const double k_tu = trustees;
  switch (s) {
  case Strategy::I:
    return params.r_t() * counts.trustworthy / k_tu - 1.0;
  case Strategy::T:
    return params.r_t() * counts.investors / k_tu;
  case Strategy::U:
    return (1.0 + params.r_ut()) * params.r_t() * counts.investors / k_tu;
  }
  return 0.0;
}

WealthVector all_payoffs(const Network& net, std::span<const Strategy> state, const GameParams& params)
{
  if (static_cast<NodeId>(state.size()) != net.size()) {
    throw std::invalid_argument("population size does not match network size");
  }
  WealthVector w(net.size());
  for (NodeId i = 0; i < net.size(); ++i) {
    w[i] = payoff(params, local_counts(net, state, i), state[static_cast<std::size_t>(i)]);
  }
  return w;
}

std::array<std::int64_t, 3> strategy_totals(std::span<const Strategy> state) noexcept
{
  std::array<std::int64_t, 3> k{};
  for (Strategy s : state) {
    ++k[index(s)];
  }
  return k;
}

} // namespace trustgame
