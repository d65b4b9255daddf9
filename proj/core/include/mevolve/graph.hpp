#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mevolve {

using Vertex = std::uint32_t;

/// Unordered vertex pair, stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Normalizes (a, b) to u < v. Throws InputError when a == b.
Edge make_edge(Vertex a, Vertex b);

/// Immutable undirected simple graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;

  /// Throws InputError on self-loops, duplicate pairs or out-of-range ids.
  Graph(std::size_t vertex_count, std::span<const Edge> edges);

  std::size_t vertex_count() const noexcept { return neighbors_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Sorted ascending.
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// Sorted ascending. Throws InputError for an out-of-range vertex.
  std::span<const Vertex> neighbors(Vertex v) const;

  std::size_t degree(Vertex v) const { return neighbors(v).size(); }

  bool has_edge(Vertex a, Vertex b) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.neighbors_.size() == b.neighbors_.size() && a.edges_ == b.edges_;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> neighbors_;
};

/// Edge-set update G' = (V, (E + additions) - deletions).
struct EdgeEdit {
  std::vector<Edge> additions;
  std::vector<Edge> deletions;

  bool empty() const noexcept { return additions.empty() && deletions.empty(); }
};

/// Γ(i) ∩ Γ(j), sorted. Throws InputError when i == j.
std::vector<Vertex> common_neighbors(const Graph& g, Vertex i, Vertex j);

/// True iff some length-2 path joins i and j. Throws InputError when i == j.
bool two_hop_linked(const Graph& g, Vertex i, Vertex j);

/// Connected components, isolated vertices included.
std::size_t component_count(const Graph& g);

/// Applies the edit to a copy of g. Throws InputError if the edit is not valid
/// against g: overlapping additions/deletions, deleting a missing edge, adding
/// an existing one, or duplicates within either side.
Graph apply_edit(const Graph& g, const EdgeEdit& edit);

}  // namespace mevolve
