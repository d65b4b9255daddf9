#include "mevolve/augmentation.hpp"

#include <algorithm>
#include <cmath>

#include "mevolve/errors.hpp"
#include "mevolve/parallel.hpp"

namespace mevolve {

std::string to_string(MappingKind kind) {
  return kind == MappingKind::random ? "random" : "motif-similarity";
}

MappingKind parse_mapping_kind(const std::string& text) {
  if (text == "random") return MappingKind::random;
  if (text == "motif-similarity" || text == "motif") return MappingKind::motif_similarity;
  throw InputError("unknown mapping '" + text + "' (expected random or motif-similarity)");
}

void AugmentationConfig::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw InputError("beta must lie in (0, 1)");
  if (max_retries < 1) throw InputError("max_retries must be at least 1");
}

std::size_t swap_budget(std::size_t edge_count, double beta) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(edge_count) * beta - 1e-9));
}

RandomCandidates build_random_candidates(const Graph& g) {
  RandomCandidates c;
  c.deletions.assign(g.edges().begin(), g.edges().end());
  const auto n = static_cast<Vertex>(g.vertex_count());
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      if (!g.has_edge(i, j)) c.additions.push_back({i, j});
    }
  }
  return c;
}

std::vector<Edge> build_motif_candidates(const Graph& g) {
  std::vector<Edge> out;
  const auto n = static_cast<Vertex>(g.vertex_count());
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      if (!g.has_edge(i, j) && two_hop_linked(g, i, j)) out.push_back({i, j});
    }
  }
  return out;
}

namespace {

/// k distinct items chosen uniformly (partial Fisher-Yates).
std::vector<Edge> uniform_sample(std::vector<Edge> items, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(items[i], items[i + rng.below(items.size() - i)]);
  }
  items.resize(k);
  return items;
}

bool keeps_structure(const Graph& before, const Graph& after, const AugmentationConfig& cfg) {
  return !cfg.preserve_components || component_count(before) == component_count(after);
}

}  // namespace

std::optional<Graph> random_mapping(const Graph& g, const AugmentationConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto candidates = build_random_candidates(g);
  const std::size_t k = std::min({swap_budget(g.edge_count(), cfg.beta),
                                  candidates.deletions.size(), candidates.additions.size()});
  if (k == 0) return std::nullopt;
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    EdgeEdit edit;
    edit.deletions = uniform_sample(candidates.deletions, k, rng);
    edit.additions = uniform_sample(candidates.additions, k, rng);
    Graph out = apply_edit(g, edit);
    if (keeps_structure(g, out, cfg)) return out;
  }
  return std::nullopt;
}

std::vector<MotifSwap> plan_motif_swaps(const Graph& g, std::size_t budget,
                                        SimilarityIndex index, Rng& rng) {
  const auto pairs = build_motif_candidates(g);
  const std::size_t k = std::min(budget, pairs.size());
  if (k == 0) return {};
  const auto weighted = addition_weights(g, pairs, index);
  const auto heads_tails = weighted_sample_without_replacement(weighted, k, rng);

  std::vector<MotifSwap> swaps;
  std::vector<Edge> claimed;
  for (const Edge& pair : heads_tails) {
    std::vector<Edge> path_edges;
    for (Vertex z : common_neighbors(g, pair.u, pair.v)) {
      path_edges.push_back(make_edge(pair.u, z));
      path_edges.push_back(make_edge(z, pair.v));
    }
    std::vector<double> scores;
    scores.reserve(path_edges.size());
    for (const Edge& e : path_edges) scores.push_back(similarity(g, e.u, e.v, index));
    const auto pick = sample_indices_without_replacement(deletion_weights(scores), 1, rng).front();
    const Edge deleted = path_edges[pick];
    if (std::find(claimed.begin(), claimed.end(), deleted) != claimed.end()) continue;
    claimed.push_back(deleted);
    swaps.push_back({pair, deleted});
  }
  return swaps;
}

EdgeEdit to_edit(std::span<const MotifSwap> swaps) {
  EdgeEdit edit;
  for (const MotifSwap& s : swaps) {
    edit.additions.push_back(s.added);
    edit.deletions.push_back(s.deleted);
  }
  return edit;
}

std::optional<Graph> motif_similarity_mapping(const Graph& g, const AugmentationConfig& cfg,
                                              Rng& rng) {
  cfg.validate();
  const std::size_t budget = swap_budget(g.edge_count(), cfg.beta);
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    const auto swaps = plan_motif_swaps(g, budget, cfg.similarity, rng);
    if (swaps.empty()) return std::nullopt;
    Graph out = apply_edit(g, to_edit(swaps));
    if (keeps_structure(g, out, cfg)) return out;
  }
  return std::nullopt;
}

std::optional<Graph> augment(const Graph& g, const AugmentationConfig& cfg, Rng& rng) {
  switch (cfg.mapping) {
    case MappingKind::random: return random_mapping(g, cfg, rng);
    case MappingKind::motif_similarity: return motif_similarity_mapping(g, cfg, rng);
  }
  throw InputError("unknown mapping kind");
}

AugmentedPool augment_pool(std::span<const Graph> graphs, std::span<const ClassLabel> labels,
                           const AugmentationConfig& cfg, std::size_t per_graph,
                           std::uint64_t seed) {
  if (graphs.size() != labels.size()) throw InputError("graphs and labels differ in length");
  if (per_graph < 1) throw InputError("per_graph must be at least 1");
  cfg.validate();

  const std::size_t tasks = graphs.size() * per_graph;
  std::vector<std::optional<Graph>> results(tasks);
  parallel_for(tasks, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t / per_graph, t % per_graph));
    results[t] = augment(graphs[t / per_graph], cfg, rng);
  });

  AugmentedPool pool;
  for (std::size_t t = 0; t < tasks; ++t) {
    if (!results[t]) {
      ++pool.failed;
      continue;
    }
    pool.graphs.push_back(std::move(*results[t]));
    pool.labels.push_back(labels[t / per_graph]);
    pool.sources.push_back(t / per_graph);
  }
  return pool;
}

}  // namespace mevolve
