#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mevolve/dataset.hpp"
#include "mevolve/graph.hpp"
#include "mevolve/rng.hpp"
#include "mevolve/similarity.hpp"

namespace mevolve {

enum class MappingKind { random, motif_similarity };

std::string to_string(MappingKind kind);
/// Accepts "random" and "motif-similarity". Throws InputError otherwise.
MappingKind parse_mapping_kind(const std::string& text);

struct AugmentationConfig {
  MappingKind mapping = MappingKind::motif_similarity;
  /// Fraction of edges swapped per augmentation, in (0, 1).
  double beta = 0.15;
  SimilarityIndex similarity = SimilarityIndex::resource_allocation;
  /// Total attempts before giving up on a graph.
  int max_retries = 10;
  bool preserve_components = true;

  void validate() const;
};

/// ceil(m * beta), robust to products like 20 * 0.15 = 3.0000000000000004.
std::size_t swap_budget(std::size_t edge_count, double beta);

struct RandomCandidates {
  std::vector<Edge> deletions;  ///< every edge
  std::vector<Edge> additions;  ///< every non-adjacent distinct pair
};

RandomCandidates build_random_candidates(const Graph& g);

/// Non-adjacent pairs joined by at least one length-2 path (open-triad head/tail).
std::vector<Edge> build_motif_candidates(const Graph& g);

/// One motif edge swap: `added` closes an open triad, `deleted` is an edge on a
/// length-2 path between the endpoints of `added`.
struct MotifSwap {
  Edge added;
  Edge deleted;
};

/// Plans up to `budget` swaps on a snapshot of g. Addition pairs are drawn by
/// similarity weight; each pair's deletion is drawn from the edges on its
/// length-2 paths by deletion weight. A pair whose deletion was already claimed
/// is dropped along with its addition.
std::vector<MotifSwap> plan_motif_swaps(const Graph& g, std::size_t budget,
                                        SimilarityIndex index, Rng& rng);

EdgeEdit to_edit(std::span<const MotifSwap> swaps);

std::optional<Graph> random_mapping(const Graph& g, const AugmentationConfig& cfg, Rng& rng);
std::optional<Graph> motif_similarity_mapping(const Graph& g, const AugmentationConfig& cfg,
                                              Rng& rng);

/// Dispatches on cfg.mapping.
std::optional<Graph> augment(const Graph& g, const AugmentationConfig& cfg, Rng& rng);

/// Augmented examples; labels are copied from the source graph.
struct AugmentedPool {
  std::vector<Graph> graphs;
  std::vector<ClassLabel> labels;
  std::vector<std::size_t> sources;  ///< index of the source graph in the input
  std::size_t failed = 0;            ///< attempts that produced no graph
};

/// Up to per_graph variants for each input graph. Each (graph, variant) draws from
/// its own generator derived from seed, so the pool does not depend on scheduling.
AugmentedPool augment_pool(std::span<const Graph> graphs, std::span<const ClassLabel> labels,
                           const AugmentationConfig& cfg, std::size_t per_graph,
                           std::uint64_t seed);

}  // namespace mevolve
