#include "mevolve/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mevolve/errors.hpp"

namespace mevolve {

double ra_score(const Graph& g, Vertex i, Vertex j) {
  double s = 0.0;
  for (Vertex z : common_neighbors(g, i, j)) s += 1.0 / static_cast<double>(g.degree(z));
  return s;
}

double cn_score(const Graph& g, Vertex i, Vertex j) {
  return static_cast<double>(common_neighbors(g, i, j).size());
}

double similarity(const Graph& g, Vertex i, Vertex j, SimilarityIndex index) {
  switch (index) {
    case SimilarityIndex::resource_allocation: return ra_score(g, i, j);
    case SimilarityIndex::common_neighbors: return cn_score(g, i, j);
  }
  throw InputError("unknown similarity index");
}

namespace {

void check_scores(std::span<const double> scores) {
  if (scores.empty()) throw InputError("empty score list");
  for (double s : scores) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InputError("scores must be finite and nonnegative");
  }
}

std::vector<double> uniform(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

}  // namespace

std::vector<double> normalize_scores(std::span<const double> scores) {
  check_scores(scores);
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
  if (total <= 0.0) return uniform(scores.size());
  std::vector<double> w(scores.begin(), scores.end());
  for (double& x : w) x /= total;
  return w;
}

WeightedCandidates addition_weights(const Graph& g, std::span<const Edge> pairs,
                                    SimilarityIndex index) {
  if (pairs.empty()) throw InputError("addition_weights needs at least one pair");
  WeightedCandidates out;
  out.items.assign(pairs.begin(), pairs.end());
  out.scores.reserve(pairs.size());
  for (const Edge& e : pairs) out.scores.push_back(similarity(g, e.u, e.v, index));
  out.weights = normalize_scores(out.scores);
  return out;
}

std::vector<double> deletion_weights(std::span<const double> scores) {
  check_scores(scores);
  if (scores.size() == 1) return {1.0};
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
  if (total <= 0.0) return uniform(scores.size());
  std::vector<double> raw;
  raw.reserve(scores.size());
  for (double s : scores) raw.push_back(std::max(0.0, 1.0 - s / total));
  return normalize_scores(raw);
}

std::vector<std::size_t> sample_indices_without_replacement(std::span<const double> weights,
                                                            std::size_t k, Rng& rng) {
  if (k > weights.size()) {
    throw SampleError("cannot draw " + std::to_string(k) + " items from " +
                      std::to_string(weights.size()));
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("weights must be finite and nonnegative");
  }
  std::vector<double> remaining(weights.begin(), weights.end());
  std::vector<bool> taken(weights.size(), false);
  std::vector<std::size_t> drawn;
  drawn.reserve(k);
  while (drawn.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (!taken[i]) total += remaining[i];
    }
    std::size_t pick = remaining.size();
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (taken[i] || remaining[i] <= 0.0) continue;
        acc += remaining[i];
        pick = i;
        if (target < acc) break;
      }
    } else {
      std::size_t slot = rng.below(remaining.size() - drawn.size());
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (taken[i]) continue;
        if (slot-- == 0) {
          pick = i;
          break;
        }
      }
    }
    taken[pick] = true;
    drawn.push_back(pick);
  }
  return drawn;
}

std::vector<Edge> weighted_sample_without_replacement(const WeightedCandidates& cands,
                                                      std::size_t k, Rng& rng) {
  if (cands.items.size() != cands.weights.size()) {
    throw InputError("candidate items and weights differ in length");
  }
  std::vector<Edge> out;
  out.reserve(k);
  for (std::size_t i : sample_indices_without_replacement(cands.weights, k, rng)) {
    out.push_back(cands.items[i]);
  }
  return out;
}

}  // namespace mevolve
