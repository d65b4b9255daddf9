#include "mevolve/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mevolve/errors.hpp"

namespace mevolve {

Edge make_edge(Vertex a, Vertex b) {
  if (a == b) {
    throw InputError("self-loop on vertex " + std::to_string(a));
  }
  return a < b ? Edge{a, b} : Edge{b, a};
}

Graph::Graph(std::size_t vertex_count, std::span<const Edge> edges)
    : edges_(edges.begin(), edges.end()), neighbors_(vertex_count) {
  for (Edge& e : edges_) {
    if (e.u >= vertex_count || e.v >= vertex_count) {
      throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") out of range for " + std::to_string(vertex_count) +
                       " vertices");
    }
    e = make_edge(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw InputError("duplicate edge (" + std::to_string(dup->u) + "," +
                     std::to_string(dup->v) + ")");
  }
  for (const Edge& e : edges_) {
    neighbors_[e.u].push_back(e.v);
    neighbors_[e.v].push_back(e.u);
  }
  for (auto& adj : neighbors_) std::sort(adj.begin(), adj.end());
}

std::span<const Vertex> Graph::neighbors(Vertex v) const {
  if (v >= neighbors_.size()) {
    throw InputError("vertex " + std::to_string(v) + " out of range for " +
                     std::to_string(neighbors_.size()) + " vertices");
  }
  return neighbors_[v];
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  if (a == b) return false;
  const auto adj = neighbors(a);
  (void)neighbors(b);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::vector<Vertex> common_neighbors(const Graph& g, Vertex i, Vertex j) {
  if (i == j) throw InputError("common_neighbors requires distinct vertices");
  const auto a = g.neighbors(i);
  const auto b = g.neighbors(j);
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool two_hop_linked(const Graph& g, Vertex i, Vertex j) {
  if (i == j) throw InputError("two_hop_linked requires distinct vertices");
  const auto a = g.neighbors(i);
  const auto b = g.neighbors(j);
  auto x = a.begin();
  auto y = b.begin();
  while (x != a.end() && y != b.end()) {
    if (*x == *y) return true;
    if (*x < *y) ++x; else ++y;
  }
  return false;
}

namespace {

Vertex find_root(std::vector<Vertex>& parent, Vertex v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

std::size_t component_count(const Graph& g) {
  std::vector<Vertex> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), Vertex{0});
  std::size_t components = g.vertex_count();
  for (const Edge& e : g.edges()) {
    const Vertex a = find_root(parent, e.u);
    const Vertex b = find_root(parent, e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

namespace {

std::vector<Edge> normalized_unique(const std::vector<Edge>& raw, const char* side) {
  std::vector<Edge> out;
  out.reserve(raw.size());
  for (const Edge& e : raw) out.push_back(make_edge(e.u, e.v));
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw InputError(std::string("duplicate pair in edit ") + side);
  }
  return out;
}

}  // namespace

Graph apply_edit(const Graph& g, const EdgeEdit& edit) {
  const auto additions = normalized_unique(edit.additions, "additions");
  const auto deletions = normalized_unique(edit.deletions, "deletions");

  for (const Edge& e : deletions) {
    if (!g.has_edge(e.u, e.v)) {
      throw InputError("deletion (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") is not an edge");
    }
  }
  for (const Edge& e : additions) {
    if (e.v >= g.vertex_count()) {
      throw InputError("addition (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") out of range");
    }
    if (g.has_edge(e.u, e.v)) {
      throw InputError("addition (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") is already an edge");
    }
  }
  // deletions are existing edges and additions are not, so the sides are disjoint

  std::vector<Edge> kept;
  kept.reserve(g.edge_count() + additions.size());
  std::set_difference(g.edges().begin(), g.edges().end(), deletions.begin(),
                      deletions.end(), std::back_inserter(kept));
  kept.insert(kept.end(), additions.begin(), additions.end());
  return Graph(g.vertex_count(), kept);
}

}  // namespace mevolve
