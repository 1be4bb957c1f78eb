#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "trustgame/network.hpp"
#include "trustgame/random.hpp"

namespace testing
{

/// Star graph: node 0 is the hub, nodes 1..k are leaves.
inline trustgame::Network star(int k)
{
  std::vector<std::vector<trustgame::NodeId>> adj(static_cast<std::size_t>(k) + 1);
  for (int j = 1; j <= k; ++j) {
    adj[0].push_back(j);
    adj[static_cast<std::size_t>(j)].push_back(0);
  }
  return trustgame::Network(std::move(adj), trustgame::ScaleFree{1});
}

/// Random connected graph: a random spanning tree plus extra random edges.
inline trustgame::Network random_connected(int n, trustgame::Rng& rng)
{
  std::vector<std::vector<trustgame::NodeId>> adj(static_cast<std::size_t>(n));
  auto link = [&](int a, int b) {
    if (a == b) {
      return;
    }
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  };
  for (int v = 1; v < n; ++v) {
    link(v, static_cast<int>(rng.below(static_cast<std::uint64_t>(v))));
  }
  const int extra = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * n)));
  for (int e = 0; e < extra; ++e) {
    link(static_cast<int>(rng.below(static_cast<std::uint64_t>(n))), static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
  }
  return trustgame::Network(std::move(adj), trustgame::ScaleFree{1});
}

inline std::string slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline int count_lines(const std::filesystem::path& p)
{
  const auto s = slurp(p);
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path fresh_dir(const std::string& name)
{
  const auto dir = std::filesystem::temp_directory_path() / ("trustgame_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace testing
