#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mevolve/dataset.hpp"
#include "mevolve/graph.hpp"

namespace mevolve {

using FeatureVector = std::vector<double>;
/// Distribution over classes; entries in [0, 1] summing to 1.
using ProbVector = std::vector<double>;

enum class FeatureKind { spectral, heat_trace };
enum class ClassifierKind { knn, logreg };

std::string to_string(FeatureKind kind);
std::string to_string(ClassifierKind kind);
FeatureKind parse_feature_kind(const std::string& text);
ClassifierKind parse_classifier_kind(const std::string& text);

// ---------------------------------------------------------------------------
// Features

/// Eigenvalues of the combinatorial Laplacian D - A, ascending.
std::vector<double> laplacian_spectrum(const Graph& g);

struct LaplacianEigenpairs {
  std::vector<double> values;                ///< ascending
  std::vector<std::vector<double>> vectors;  ///< unit-norm, vectors[k] pairs with values[k]
};

LaplacianEigenpairs laplacian_eigenpairs(const Graph& g);

/// Sorted Laplacian spectrum truncated or zero-padded to d entries.
FeatureVector spectral_features(const Graph& g, std::size_t d);

/// Σ_i exp(-t λ_i) / n for a given spectrum.
double heat_trace(std::span<const double> spectrum, double t);

/// d log-spaced times over [1e-2, 1e2]; a single time of 1e-2 when d == 1.
std::vector<double> heat_trace_times(std::size_t d);

/// Normalized heat trace h(t)/n at heat_trace_times(d). All zeros for an empty graph.
FeatureVector heat_trace_features(const Graph& g, std::size_t d);

FeatureVector extract_features(const Graph& g, FeatureKind kind, std::size_t d);

std::vector<FeatureVector> extract_features(std::span<const Graph> graphs, FeatureKind kind,
                                            std::size_t d);

// ---------------------------------------------------------------------------
// Classifiers

struct ClassifierSettings {
  ClassifierKind kind = ClassifierKind::knn;
  std::size_t k = 5;
  double learning_rate = 0.1;
  double l2 = 1e-3;
  std::size_t max_epochs = 2000;
  double gradient_tolerance = 1e-6;

  void validate() const;
};

/// Softmax with max-subtraction, so shifting every score leaves it unchanged.
ProbVector softmax(std::span<const double> scores);

/// A fitted, immutable classifier. Features are z-scored with training statistics
/// before either rule is applied.
class Model {
 public:
  ClassifierKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return mean_.size(); }
  std::size_t class_count() const noexcept { return classes_; }

  /// k-NN: label frequencies among the k nearest training points (Euclidean,
  /// ties to the lower training index). logreg: softmax of the linear scores.
  /// Throws InputError on a dimension mismatch.
  ProbVector predict_proba(std::span<const double> x) const;

  /// Argmax of predict_proba, ties to the lower class.
  ClassLabel predict(std::span<const double> x) const;

  /// Logistic model with explicit parameters and identity standardization.
  /// weights is row-major classes x dim.
  static Model logistic(std::size_t classes, std::size_t dim, std::vector<double> weights,
                        std::vector<double> bias);

  friend Model fit(const std::vector<FeatureVector>&, std::span<const ClassLabel>, std::size_t,
                   const ClassifierSettings&);

 private:
  std::vector<double> standardize(std::span<const double> x) const;

  ClassifierKind kind_ = ClassifierKind::knn;
  std::size_t classes_ = 0;
  std::vector<double> mean_;
  std::vector<double> scale_;

  std::size_t k_ = 5;
  std::vector<std::vector<double>> points_;
  std::vector<ClassLabel> point_labels_;

  std::vector<double> weights_;  // classes x dim, row-major
  std::vector<double> bias_;
};

/// Fits a classifier over class_count classes. Throws FitError when fewer than two
/// classes are present and InputError on empty input, inconsistent dimensions or a
/// label outside [0, class_count).
Model fit(const std::vector<FeatureVector>& features, std::span<const ClassLabel> labels,
          std::size_t class_count, const ClassifierSettings& settings);

/// Mean L2-regularized cross-entropy and its gradient for a logistic model.
/// Weights are row-major classes x dim; the bias is not regularized.
struct LogisticObjective {
  double loss = 0.0;
  std::vector<double> weight_gradient;
  std::vector<double> bias_gradient;
};

LogisticObjective logistic_objective(std::span<const double> weights,
                                     std::span<const double> bias,
                                     const std::vector<FeatureVector>& features,
                                     std::span<const ClassLabel> labels, std::size_t classes,
                                     double l2);

double accuracy(const Model& model, const std::vector<FeatureVector>& features,
                std::span<const ClassLabel> labels);

}  // namespace mevolve
