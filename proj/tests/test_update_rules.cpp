#include <doctest.h>

#include <array>
#include <set>

#include "helpers.hpp"
#include "trustgame/update_rules.hpp"

using namespace trustgame;

namespace
{

struct StarCase
{
  Network net;
  PopulationState state;
  WealthVector w;

  FrozenStep view() const { return {net, state, w}; }
};

/// Hub 0 with leaves 1..4; `leaves` gives leaf strategies and payoffs.
StarCase star_case(Strategy hub, double hub_w, std::array<Strategy, 4> leaves, std::array<double, 4> leaf_w)
{
  StarCase c{testing::star(4), {hub}, WealthVector(5)};
  c.w[0] = hub_w;
  for (int k = 0; k < 4; ++k) {
    c.state.push_back(leaves[static_cast<std::size_t>(k)]);
    c.w[k + 1] = leaf_w[static_cast<std::size_t>(k)];
  }
  return c;
}

template <typename F>
std::array<double, 3> frequencies(int trials, F&& draw)
{
  std::array<double, 3> f{};
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix64(static_cast<std::uint64_t>(t) + 12345));
    f[index(draw(rng))] += 1.0;
  }
  for (auto& x : f) {
    x /= trials;
  }
  return f;
}

constexpr auto I = Strategy::I;
constexpr auto T = Strategy::T;
constexpr auto U = Strategy::U;

} // namespace

TEST_CASE("rule tokens")
{
  for (Rule r : {Rule::UI, Rule::UI_VM, Rule::MORAN, Rule::PROP}) {
    CHECK(rule_from_token(to_token(r)) == r);
  }
  CHECK_FALSE(rule_from_token("fermi"));
  CHECK_THROWS_AS((UpdateRuleConfig{Rule::UI_VM, 1.5}.validate()), std::invalid_argument);
}

TEST_CASE("unconditional imitation")
{
  SUBCASE("copies the unique best neighbor without drawing")
  {
    const auto c = star_case(I, 4.0, {T, U, T, T}, {3.0, 5.0, 1.0, 2.0});
    Rng rng(1);
    CHECK(ui_update(0, c.view(), rng) == U);
    CHECK(rng.draws() == 0);
  }
  SUBCASE("keeps own strategy when no neighbor is strictly better")
  {
    const auto c = star_case(I, 4.0, {T, U, T, T}, {3.0, 4.0, 1.0, 2.0});
    Rng rng(1);
    CHECK(ui_update(0, c.view(), rng) == I);
    CHECK(rng.draws() == 0);
  }
  SUBCASE("uniform tie break among co-maximal neighbors")
  {
    const auto c = star_case(I, 4.0, {T, U, I, I}, {5.0, 5.0, 1.0, 2.0});
    const auto f = frequencies(10000, [&](Rng& r) { return ui_update(0, c.view(), r); });
    CHECK(std::abs(f[index(T)] - 0.5) <= 0.05);
    CHECK(std::abs(f[index(U)] - 0.5) <= 0.05);
    CHECK(f[index(I)] == 0.0);
  }
}

TEST_CASE("UI with voter noise")
{
  const auto c = star_case(I, 4.0, {T, T, U, U}, {1.0, 2.0, 3.0, 0.0});

  SUBCASE("q = 0 reproduces UI draw for draw")
  {
    const auto tie = star_case(I, 4.0, {T, U, T, U}, {5.0, 5.0, 5.0, 1.0});
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng a(seed), b(seed);
      CHECK(ui_vm_update(0, tie.view(), a, 0.0) == ui_update(0, tie.view(), b));
      CHECK(a.draws() == b.draws());
    }
  }
  SUBCASE("q = 1 is the voter model")
  {
    const auto f = frequencies(100000, [&](Rng& r) { return ui_vm_update(0, c.view(), r, 1.0); });
    CHECK(std::abs(f[index(T)] - 0.5) <= 0.01);
    CHECK(std::abs(f[index(U)] - 0.5) <= 0.01);
  }
  SUBCASE("q = 0.1 mixture")
  {
    // UI keeps I here; the voter branch picks T or U with probability 1/2 each.
    const auto f = frequencies(100000, [&](Rng& r) { return ui_vm_update(0, c.view(), r, 0.1); });
    CHECK(std::abs(f[index(I)] - 0.9) <= 0.01);
    CHECK(std::abs(f[index(T)] - 0.05) <= 0.01);
    CHECK(std::abs(f[index(U)] - 0.05) <= 0.01);
  }
}

TEST_CASE("local Moran step")
{
  SUBCASE("equal payoffs sample the closed neighborhood uniformly")
  {
    const auto c = star_case(I, 2.0, {T, U, I, I}, {2.0, 2.0, 2.0, 2.0});
    const auto p = moran_probabilities(0, c.view());
    for (double x : p) {
      CHECK(x == doctest::Approx(0.2));
    }
    const auto f = frequencies(100000, [&](Rng& r) { return moran_update(0, c.view(), r); });
    // Two of five candidates differ from the focal strategy.
    CHECK(std::abs((1.0 - f[index(I)]) - 2.0 / 5.0) <= 0.01);
  }
  SUBCASE("weights proportional to payoff + 1")
  {
    // Shifted fitness: self 1, neighbors 3, 0, 0, 0.
    const auto c = star_case(I, 0.0, {T, U, U, U}, {2.0, -1.0, -1.0, -1.0});
    const auto p = moran_probabilities(0, c.view());
    double total = 0.0;
    for (double x : p) {
      CHECK(x >= 0.0);
      total += x;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == doctest::Approx(0.75));
    const auto f = frequencies(100000, [&](Rng& r) { return moran_update(0, c.view(), r); });
    CHECK(std::abs(f[index(T)] - 0.75) <= 0.01);
    CHECK(std::abs(f[index(I)] - 0.25) <= 0.01);
    CHECK(f[index(U)] == 0.0);
  }
  SUBCASE("worse neighbors can be imitated")
  {
    const auto c = star_case(I, 3.0, {U, U, U, U}, {1.0, 1.0, 1.0, 1.0});
    const auto f = frequencies(10000, [&](Rng& r) { return moran_update(0, c.view(), r); });
    CHECK(f[index(U)] > 0.0);
  }
  SUBCASE("all candidates at the payoff floor fall back to uniform")
  {
    const auto c = star_case(I, -1.0, {T, T, T, T}, {-1.0, -1.0, -1.0, -1.0});
    const auto f = frequencies(50000, [&](Rng& r) { return moran_update(0, c.view(), r); });
    CHECK(std::abs(f[index(T)] - 0.8) <= 0.01);
  }
}

TEST_CASE("proportional imitation")
{
  const GameParams p(6.0, 0.33);

  SUBCASE("phi")
  {
    CHECK(phi(p, 4, 4) == doctest::Approx(32.92));
    CHECK(phi(p, 1, 4) == phi(p, 4, 4));
    CHECK(phi(GameParams(1.01, 0.01), 1, 1) > 0.0);
  }
  SUBCASE("never copies a worse or equal neighbor")
  {
    const auto c = star_case(I, 5.0, {T, U, T, U}, {5.0, 1.0, 4.9, -1.0});
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      Rng r(seed);
      CHECK(prop_update(0, c.view(), p, r) == I);
    }
  }
  SUBCASE("switch probability is the payoff gap over phi")
  {
    const auto c = star_case(I, 2.0, {T, T, T, T}, {5.0, 5.0, 5.0, 5.0});
    const auto f = frequencies(200000, [&](Rng& r) { return prop_update(0, c.view(), p, r); });
    CHECK(std::abs(f[index(T)] - 3.0 / 32.92) <= 0.003);
  }
  SUBCASE("saturated gap switches surely")
  {
    const double gap = phi(p, 4, 1);
    const auto c = star_case(I, -1.0, {U, U, U, U}, {gap - 1.0, gap - 1.0, gap - 1.0, gap - 1.0});
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      Rng r(seed);
      CHECK(prop_update(0, c.view(), p, r) == U);
    }
  }
}

TEST_CASE("phi normalizes every realizable gap on degree-4 neighborhoods")
{
  // Enumerate all 3^5 closed-neighborhood assignments of a degree-4 focal agent.
  for (double r_ut : {0.11, 0.33, 0.66, 0.99}) {
    const GameParams p(6.0, r_ut);
    std::set<double> realizable;
    for (int code_bits = 0; code_bits < 243; ++code_bits) {
      int x = code_bits;
      std::array<int, 3> k{};
      const int focal = x % 3;
      for (int slot = 0; slot < 5; ++slot) {
        ++k[static_cast<std::size_t>(x % 3)];
        x /= 3;
      }
      realizable.insert(payoff(p, {k[0], k[1], k[2]}, kStrategies[static_cast<std::size_t>(focal)]));
    }
    const double norm = phi(p, 4, 4);
    for (double wi : realizable) {
      for (double wj : realizable) {
        if (wj > wi) {
          const double prob = (wj - wi) / norm;
          CHECK(prob > 0.0);
          CHECK(prob <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("rules never write to shared state")
{
  const auto c = star_case(I, 0.0, {T, U, T, U}, {1.0, 2.0, 3.0, 4.0});
  const auto before = c.state;
  const WealthVector w_before = c.w;
  const GameParams p(6.0, 0.33);
  for (Rule r : {Rule::UI, Rule::UI_VM, Rule::MORAN, Rule::PROP}) {
    for (NodeId i = 0; i < 5; ++i) {
      Rng rng(static_cast<std::uint64_t>(i));
      (void)apply_rule({r, 0.1}, i, c.view(), p, rng);
    }
  }
  CHECK(c.state == before);
  CHECK(c.w == w_before);
}
