#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mevolve/augmentation.hpp"
#include "mevolve/classify.hpp"
#include "mevolve/dataset.hpp"

namespace mevolve {

/// Row k is the mean predicted distribution over validation examples of true class k.
struct ConfusionMatrix {
  std::vector<ProbVector> rows;
  std::vector<std::size_t> class_counts;

  std::span<const double> row(ClassLabel k) const { return rows.at(static_cast<std::size_t>(k)); }
};

/// Rows of classes absent from the examples are uniform.
ConfusionMatrix confusion_from_probs(const std::vector<ProbVector>& probs,
                                     std::span<const ClassLabel> labels, std::size_t classes);

ConfusionMatrix confusion_matrix(const Model& model, const std::vector<FeatureVector>& features,
                                 std::span<const ClassLabel> labels);

/// p · q_y. Throws InputError when the lengths differ.
double label_reliability(std::span<const double> p, std::span<const double> q_y);

/// Count of correct examples with r < theta plus incorrect ones with r > theta.
std::size_t threshold_objective(std::span<const double> reliabilities,
                                const std::vector<bool>& correct, double theta);

/// Smallest minimizer of threshold_objective over {0} ∪ reliabilities. The
/// objective only changes at the r_i, so this is the global minimum over all θ.
/// Throws InputError on empty or mismatched input.
double find_threshold(std::span<const double> reliabilities, const std::vector<bool>& correct);

/// Reliability of each example under its carried label.
std::vector<double> reliabilities(const Model& model, const ConfusionMatrix& q,
                                  const std::vector<FeatureVector>& features,
                                  std::span<const ClassLabel> labels);

/// Indices whose reliability strictly exceeds theta, ascending.
std::vector<std::size_t> accept_above(std::span<const double> reliabilities, double theta);

std::vector<std::size_t> filter_pool(const Model& model, const ConfusionMatrix& q,
                                     const std::vector<FeatureVector>& pool_features,
                                     std::span<const ClassLabel> pool_labels, double theta);

/// Which graphs feed the augmentation pool in each iteration.
enum class PoolSource {
  original_train,  ///< the original training graphs only
  current_train,   ///< the merged training set, accepted augmentations included
};

std::string to_string(PoolSource source);
PoolSource parse_pool_source(const std::string& text);

struct EvolveConfig {
  AugmentationConfig augmentation;
  ClassifierSettings classifier;
  FeatureKind features = FeatureKind::spectral;
  std::size_t dim = 128;
  std::size_t iterations = 5;
  std::size_t per_graph = 1;
  PoolSource pool_source = PoolSource::original_train;

  void validate() const;
};

struct IterationRecord {
  std::size_t pool_size = 0;
  std::size_t failed_augmentations = 0;
  std::size_t accepted = 0;
  std::size_t train_size = 0;  ///< after the merge
  double threshold = 0.0;
  double val_accuracy = 0.0;   ///< retrained model
  double test_accuracy = 0.0;  ///< retrained model
};

struct EvolutionReport {
  double baseline_val_accuracy = 0.0;
  double baseline_test_accuracy = 0.0;
  std::vector<IterationRecord> iterations;
  double final_val_accuracy = 0.0;
  double final_test_accuracy = 0.0;
  Model final_model;
};

/// Pre-trains on split.train, then for each iteration: augments the current
/// training set, calibrates Q and θ on split.val with the current model, merges
/// the pool examples whose reliability exceeds θ, and retrains from scratch.
/// Validation and test graphs are never augmented or merged.
EvolutionReport m_evolve(const GraphDataset& ds, const Split& split, const EvolveConfig& cfg,
                         std::uint64_t seed);

}  // namespace mevolve
