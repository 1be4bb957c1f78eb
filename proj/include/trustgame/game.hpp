#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "trustgame/network.hpp"

namespace trustgame
{

/// Agent play. The underlying value is the numeric code used by the
/// spatial and temporal correlation measures.
enum class Strategy : std::uint8_t { I = 1, T = 2, U = 3 };

inline constexpr std::array<Strategy, 3> kStrategies{Strategy::I, Strategy::T, Strategy::U};

constexpr int code(Strategy s) noexcept { return static_cast<int>(s); }
constexpr std::size_t index(Strategy s) noexcept { return static_cast<std::size_t>(s) - 1; }
std::optional<Strategy> strategy_from_code(int code) noexcept;
std::string_view to_token(Strategy s) noexcept;
std::optional<Strategy> strategy_from_token(std::string_view token) noexcept;

using PopulationState = std::vector<Strategy>;
using WealthVector = Eigen::VectorXd;

/// Trust-game constants. R_U is derived as R_T * (1 + r_UT).
class GameParams
{
public:
  GameParams(double r_t, double r_ut);

  double r_t() const noexcept { return r_t_; }
  double r_ut() const noexcept { return r_ut_; }
  double r_u() const noexcept { return r_t_ * (1.0 + r_ut_); }

private:
  double r_t_;
  double r_ut_;
};

/// Strategy counts over the closed neighborhood (focal agent included).
struct NeighborhoodCounts
{
  int investors = 0;
  int trustworthy = 0;
  int untrustworthy = 0;

  int trustees() const noexcept { return trustworthy + untrustworthy; }
  int total() const noexcept { return investors + trustworthy + untrustworthy; }
};

NeighborhoodCounts local_counts(const Network& net, std::span<const Strategy> state, NodeId i);

/// Net wealth of a focal agent playing `s` given its closed-neighborhood counts.
/// Zero whenever the neighborhood holds no trustee.
double payoff(const GameParams& params, const NeighborhoodCounts& counts, Strategy s) noexcept;

/// Simultaneous payoffs of every agent from one state snapshot.
WealthVector all_payoffs(const Network& net, std::span<const Strategy> state, const GameParams& params);

inline double global_net_wealth(const WealthVector& w) { return w.sum(); }

/// Population totals (I, T, U).
std::array<std::int64_t, 3> strategy_totals(std::span<const Strategy> state) noexcept;

} // namespace trustgame
