#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "trustgame/random.hpp"

namespace trustgame
{

using NodeId = std::int32_t;

class UnsupportedTopology : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

struct Lattice
{
  int side;
};

struct ScaleFree
{
  int m;
};

using TopologyKind = std::variant<Lattice, ScaleFree>;

/// Immutable undirected simple graph.
class Network
{
public:
  Network(std::vector<std::vector<NodeId>> adjacency, TopologyKind kind);

  NodeId size() const noexcept { return static_cast<NodeId>(adjacency_.size()); }
  std::span<const NodeId> neighbors(NodeId i) const { return adjacency_[static_cast<std::size_t>(i)]; }
  int degree(NodeId i) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(i)].size()); }
  std::int64_t edge_count() const noexcept { return edges_; }
  const TopologyKind& kind() const noexcept { return kind_; }

  bool is_lattice() const noexcept { return std::holds_alternative<Lattice>(kind_); }
  /// Lattice side length; throws UnsupportedTopology for scale-free graphs.
  int side() const;

  /// Undirected edges as (smaller id, larger id), sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  friend bool operator==(const Network& a, const Network& b) { return a.adjacency_ == b.adjacency_; }

private:
  std::vector<std::vector<NodeId>> adjacency_;
  TopologyKind kind_;
  std::int64_t edges_ = 0;
};

/// Periodic von Neumann lattice. Node id = row * side + col.
Network build_lattice(int side);

/// Barabasi-Albert preferential attachment seeded from a complete graph on m + 1 nodes.
Network build_scale_free(int n, int m, Rng& rng);

/// L1 distance on the torus.
int lattice_distance(const Network& net, NodeId i, NodeId j);

/// Unordered node pairs {i, j} at a given torus L1 distance.
class PairsAtDistance
{
public:
  PairsAtDistance(const Network& net, int l);

  std::int64_t count() const noexcept { return count_; }

  template <typename Visitor>
  void for_each(Visitor&& visit) const
  {
    const NodeId n = static_cast<NodeId>(side_) * side_;
    for (const auto& [dr, dc] : offsets_) {
      for (NodeId i = 0; i < n; ++i) {
        const int r = i / side_;
        const int c = i % side_;
        const NodeId j = ((r + dr) % side_) * side_ + (c + dc) % side_;
        if (i < j) {
          visit(i, j);
        }
      }
    }
  }

  std::vector<std::pair<NodeId, NodeId>> to_vector() const;

private:
  int side_;
  std::vector<std::pair<int, int>> offsets_;
  std::int64_t count_ = 0;
};

PairsAtDistance pairs_at_distance(const Network& net, int l);

/// Writes `src,dst` CSV, one undirected edge per row.
void write_edge_list(std::ostream& os, const Network& net);

} // namespace trustgame
