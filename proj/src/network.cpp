#include "trustgame/network.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

namespace trustgame
{

Network::Network(std::vector<std::vector<NodeId>> adjacency, TopologyKind kind)
    : adjacency_(std::move(adjacency)), kind_(kind)
{
  std::int64_t degree_sum = 0;
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    degree_sum += static_cast<std::int64_t>(nbrs.size());
  }
  edges_ = degree_sum / 2;
}

int Network::side() const
{
  if (const auto* lat = std::get_if<Lattice>(&kind_)) {
    return lat->side;
  }
  throw UnsupportedTopology("operation requires a lattice topology");
}

std::vector<std::pair<NodeId, NodeId>> Network::edges() const
{
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(static_cast<std::size_t>(edges_));
  for (NodeId i = 0; i < size(); ++i) {
    for (NodeId j : neighbors(i)) {
      if (i < j) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

Network build_lattice(int side)
{
  if (side < 2) {
    throw std::invalid_argument("lattice side must be >= 2, got " + std::to_string(side));
  }
  const NodeId n = static_cast<NodeId>(side) * side;
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(n));
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      auto& nbrs = adj[static_cast<std::size_t>(r * side + c)];
      nbrs = {((r + side - 1) % side) * side + c, ((r + 1) % side) * side + c, r * side + (c + side - 1) % side,
              r * side + (c + 1) % side};
    }
  }
  return Network(std::move(adj), Lattice{side});
}

Network build_scale_free(int n, int m, Rng& rng)
{
  if (m < 1 || n <= m) {
    throw std::invalid_argument("scale-free graph needs n > m >= 1, got n=" + std::to_string(n) +
                                " m=" + std::to_string(m));
  }
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(n));
  // Every edge contributes both endpoints, so a uniform pick from this list
  // selects a node with probability proportional to its degree.
  std::vector<NodeId> endpoints;
  endpoints.reserve(static_cast<std::size_t>(2) * m * n);

  auto connect = [&](NodeId a, NodeId b) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
    endpoints.push_back(a);
    endpoints.push_back(b);
  };

  for (NodeId a = 0; a <= m; ++a) {
    for (NodeId b = a + 1; b <= m; ++b) {
      connect(a, b);
    }
  }

  std::vector<NodeId> targets;
  targets.reserve(static_cast<std::size_t>(m));
  for (NodeId v = m + 1; v < n; ++v) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      const NodeId t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    for (NodeId t : targets) {
      connect(v, t);
    }
  }
  return Network(std::move(adj), ScaleFree{m});
}

namespace
{

int torus_axis(int a, int b, int side)
{
  const int d = std::abs(a - b);
  return std::min(d, side - d);
}

} // namespace

int lattice_distance(const Network& net, NodeId i, NodeId j)
{
  const int side = net.side();
  return torus_axis(i / side, j / side, side) + torus_axis(i % side, j % side, side);
}

PairsAtDistance::PairsAtDistance(const Network& net, int l) : side_(net.side())
{
  if (l <= 0) {
    throw std::invalid_argument("pair distance must be positive, got " + std::to_string(l));
  }
  for (int dr = 0; dr < side_; ++dr) {
    for (int dc = 0; dc < side_; ++dc) {
      if (torus_axis(0, dr, side_) + torus_axis(0, dc, side_) == l) {
        offsets_.emplace_back(dr, dc);
      }
    }
  }
  count_ = static_cast<std::int64_t>(side_) * side_ * static_cast<std::int64_t>(offsets_.size()) / 2;
}

std::vector<std::pair<NodeId, NodeId>> PairsAtDistance::to_vector() const
{
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(static_cast<std::size_t>(count_));
  for_each([&](NodeId i, NodeId j) { out.emplace_back(i, j); });
  return out;
}

PairsAtDistance pairs_at_distance(const Network& net, int l) { return PairsAtDistance(net, l); }

void write_edge_list(std::ostream& os, const Network& net)
{
  os << "src,dst\n";
  for (const auto& [a, b] : net.edges()) {
    os << a << ',' << b << '\n';
  }
}

} // namespace trustgame
