#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mevolve/augmentation.hpp"
#include "mevolve/classify.hpp"
#include "mevolve/dataset.hpp"
#include "mevolve/evolve.hpp"

namespace mevolve {

/// Protocol defaults: 5-fold CV repeated 10 times, beta 0.15, 5 iterations,
/// 128-dimensional features, 7:1:2 train/val/test.
struct ExperimentConfig {
  std::filesystem::path dataset_dir;
  std::string dataset;

  std::vector<MappingKind> mappings{MappingKind::motif_similarity};
  std::vector<ClassifierKind> classifiers{ClassifierKind::knn};
  std::vector<FeatureKind> features{FeatureKind::spectral};

  double beta = 0.15;
  int max_retries = 10;
  std::size_t iterations = 5;
  std::size_t per_graph = 1;
  PoolSource pool_source = PoolSource::original_train;
  ClassifierSettings classifier;  ///< hyperparameters; kind is taken from `classifiers`
  std::size_t dim = 128;
  std::size_t folds = 5;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;

  std::filesystem::path out_path;
  std::filesystem::path csv_path;

  /// Throws InputError on any invalid setting.
  void validate() const;

  EvolveConfig evolve_config(MappingKind mapping, ClassifierKind classifier_kind,
                             FeatureKind feature_kind) const;
};

/// A trial that failed; names the (repeat, fold) it belongs to.
class TrialError : public std::runtime_error {
 public:
  TrialError(std::size_t repeat, std::size_t fold, const std::string& what)
      : std::runtime_error("repeat " + std::to_string(repeat) + ", fold " +
                           std::to_string(fold) + ": " + what),
        repeat_(repeat),
        fold_(fold) {}

  std::size_t repeat() const noexcept { return repeat_; }
  std::size_t fold() const noexcept { return fold_; }

 private:
  std::size_t repeat_;
  std::size_t fold_;
};

struct TrialRecord {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  std::uint64_t seed = 0;
  MappingKind mapping = MappingKind::motif_similarity;
  ClassifierKind classifier = ClassifierKind::knn;
  FeatureKind features = FeatureKind::spectral;
  std::size_t train_size = 0;
  std::size_t val_size = 0;
  std::size_t test_size = 0;
  double baseline_accuracy = 0.0;
  double evolved_accuracy = 0.0;
  std::vector<IterationRecord> iterations;
};

struct ResultCell {
  MappingKind mapping = MappingKind::motif_similarity;
  ClassifierKind classifier = ClassifierKind::knn;
  FeatureKind features = FeatureKind::spectral;
  std::size_t trials = 0;
  double baseline_mean = 0.0;
  double baseline_std = 0.0;
  double evolved_mean = 0.0;
  double evolved_std = 0.0;
  /// (evolved - baseline) / baseline
  double relative_improvement = 0.0;
};

struct ResultTable {
  std::string dataset;
  std::vector<ResultCell> cells;
  /// Mean relative improvement over the cells of each mapping.
  std::map<MappingKind, double> average_improvement;
};

struct ExperimentResult {
  ResultTable table;
  std::vector<TrialRecord> trials;
};

/// Runs baseline and evolved models on identical splits for every
/// (repeat, fold, mapping, classifier, feature) combination. Trial seeds are
/// derive_seed(cfg.seed, repeat, fold).
ExperimentResult run_experiment(const GraphDataset& ds, const ExperimentConfig& cfg);

/// Loads cfg.dataset from cfg.dataset_dir, then runs it.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Aggregates trials into one cell per requested combination, in request order.
ResultTable summarize(const std::string& dataset, const std::vector<TrialRecord>& trials,
                      const ExperimentConfig& cfg);

/// Hierarchical report with the configuration, the table and every trial.
std::string structured_report(const ExperimentResult& result, const ExperimentConfig& cfg);

/// One header line plus one row per cell.
std::string summary_csv(const ResultTable& table);

/// Writes structured_report to cfg.out_path and summary_csv to cfg.csv_path
/// (each skipped when empty). Throws IoError naming the path on failure.
void emit_reports(const ExperimentResult& result, const ExperimentConfig& cfg);

std::string format_stats(const std::string& name, const DatasetStats& stats);

/// A dataset of per_graph augmented variants of every graph, labels copied.
GraphDataset augment_dataset(const GraphDataset& ds, const AugmentationConfig& cfg,
                             std::size_t per_graph, std::uint64_t seed);

}  // namespace mevolve
