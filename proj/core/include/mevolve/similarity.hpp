#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mevolve/graph.hpp"
#include "mevolve/rng.hpp"

namespace mevolve {

enum class SimilarityIndex {
  resource_allocation,  ///< Σ 1/d_z over common neighbours z
  common_neighbors,     ///< |Γ(i) ∩ Γ(j)|
};

/// Resource-allocation index of (i, j). Throws InputError when i == j.
double ra_score(const Graph& g, Vertex i, Vertex j);

/// Common-neighbour count of (i, j). Throws InputError when i == j.
double cn_score(const Graph& g, Vertex i, Vertex j);

double similarity(const Graph& g, Vertex i, Vertex j, SimilarityIndex index);

/// Candidate pairs with their similarity scores and normalized sampling weights.
struct WeightedCandidates {
  std::vector<Edge> items;
  std::vector<double> scores;
  std::vector<double> weights;
};

/// Normalizes nonnegative scores to a distribution; all-zero scores become uniform.
/// Throws InputError on an empty or negative input.
std::vector<double> normalize_scores(std::span<const double> scores);

/// Scores every pair and weights it proportionally to its score.
/// Throws InputError when pairs is empty.
WeightedCandidates addition_weights(const Graph& g, std::span<const Edge> pairs,
                                    SimilarityIndex index = SimilarityIndex::resource_allocation);

/// Deletion weights over one candidate set: raw weight 1 - s/Σs, renormalized.
/// The least similar edge is the most likely to go. A single item gets weight 1,
/// all-zero scores get uniform weights. Throws InputError on empty or negative input.
std::vector<double> deletion_weights(std::span<const double> scores);

/// Draws k distinct indices by successive draw-and-renormalize. Once all remaining
/// weight is zero the remaining draws are uniform. Throws SampleError if k exceeds
/// the number of weights.
std::vector<std::size_t> sample_indices_without_replacement(std::span<const double> weights,
                                                            std::size_t k, Rng& rng);

std::vector<Edge> weighted_sample_without_replacement(const WeightedCandidates& cands,
                                                      std::size_t k, Rng& rng);

}  // namespace mevolve
