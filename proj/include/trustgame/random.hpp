#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace trustgame
{

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t combine(std::uint64_t seed, std::uint64_t value) noexcept
{
  return mix64(seed ^ mix64(value));
}

/// 64-bit FNV-1a, used to turn textual cell keys into seeds.
constexpr std::uint64_t fnv1a(std::string_view text) noexcept
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Small counter-style generator. Cheap to construct, so every
/// (run, step, agent) triple can own an independent stream.
class Rng
{
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept
  {
    ++draws_;
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept
  {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const __uint128_t m = static_cast<__uint128_t>((*this)()) * n;
      if (static_cast<std::uint64_t>(m) >= threshold) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

  std::uint64_t draws() const noexcept { return draws_; }

private:
  std::uint64_t state_;
  std::uint64_t draws_ = 0;
};

/// Stream keys. Each tag separates an independent family of substreams.
enum class StreamTag : std::uint64_t { Agent = 1, Population = 2, Graph = 3, Probe = 4 };

inline Rng run_stream(std::uint64_t master_seed, std::uint64_t run, StreamTag tag)
{
  return Rng(combine(combine(combine(master_seed, run), static_cast<std::uint64_t>(tag)), 0));
}

inline Rng agent_stream(std::uint64_t master_seed, std::uint64_t run, std::uint64_t step, std::uint64_t agent)
{
  return Rng(combine(combine(combine(combine(master_seed, run), static_cast<std::uint64_t>(StreamTag::Agent)), step),
                     agent));
}

} // namespace trustgame
