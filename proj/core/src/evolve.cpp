#include "mevolve/evolve.hpp"

#include <algorithm>

#include "mevolve/errors.hpp"

namespace mevolve {

ConfusionMatrix confusion_from_probs(const std::vector<ProbVector>& probs,
                                     std::span<const ClassLabel> labels, std::size_t classes) {
  if (probs.size() != labels.size()) throw InputError("probabilities and labels differ in length");
  ConfusionMatrix q;
  q.rows.assign(classes, ProbVector(classes, 0.0));
  q.class_counts.assign(classes, 0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const auto k = static_cast<std::size_t>(labels[i]);
    if (labels[i] < 0 || k >= classes) throw InputError("label out of range");
    if (probs[i].size() != classes) throw InputError("probability vector has wrong length");
    for (std::size_t c = 0; c < classes; ++c) q.rows[k][c] += probs[i][c];
    ++q.class_counts[k];
  }
  for (std::size_t k = 0; k < classes; ++k) {
    const double n = static_cast<double>(q.class_counts[k]);
    for (double& v : q.rows[k]) v = n > 0 ? v / n : 1.0 / static_cast<double>(classes);
  }
  return q;
}

ConfusionMatrix confusion_matrix(const Model& model, const std::vector<FeatureVector>& features,
                                 std::span<const ClassLabel> labels) {
  std::vector<ProbVector> probs;
  probs.reserve(features.size());
  for (const auto& x : features) probs.push_back(model.predict_proba(x));
  return confusion_from_probs(probs, labels, model.class_count());
}

double label_reliability(std::span<const double> p, std::span<const double> q_y) {
  if (p.size() != q_y.size()) throw InputError("reliability vectors differ in length");
  double r = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) r += p[i] * q_y[i];
  return r;
}

std::size_t threshold_objective(std::span<const double> reliabilities,
                                const std::vector<bool>& correct, double theta) {
  std::size_t misplaced = 0;
  for (std::size_t i = 0; i < reliabilities.size(); ++i) {
    const double r = reliabilities[i];
    if (correct[i] ? r < theta : r > theta) ++misplaced;
  }
  return misplaced;
}

double find_threshold(std::span<const double> reliabilities, const std::vector<bool>& correct) {
  if (reliabilities.empty() || reliabilities.size() != correct.size()) {
    throw InputError("find_threshold needs equal-length nonempty inputs");
  }
  std::vector<double> candidates(reliabilities.begin(), reliabilities.end());
  candidates.push_back(0.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  double best = candidates.front();
  std::size_t best_value = threshold_objective(reliabilities, correct, best);
  for (double theta : candidates) {
    const std::size_t value = threshold_objective(reliabilities, correct, theta);
    if (value < best_value) {
      best = theta;
      best_value = value;
    }
  }
  return best;
}

std::vector<double> reliabilities(const Model& model, const ConfusionMatrix& q,
                                  const std::vector<FeatureVector>& features,
                                  std::span<const ClassLabel> labels) {
  if (features.size() != labels.size()) throw InputError("features and labels differ in length");
  std::vector<double> r;
  r.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    r.push_back(label_reliability(model.predict_proba(features[i]), q.row(labels[i])));
  }
  return r;
}

std::vector<std::size_t> accept_above(std::span<const double> reliabilities, double theta) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < reliabilities.size(); ++i) {
    if (reliabilities[i] > theta) kept.push_back(i);
  }
  return kept;
}

std::vector<std::size_t> filter_pool(const Model& model, const ConfusionMatrix& q,
                                     const std::vector<FeatureVector>& pool_features,
                                     std::span<const ClassLabel> pool_labels, double theta) {
  return accept_above(reliabilities(model, q, pool_features, pool_labels), theta);
}

std::string to_string(PoolSource source) {
  return source == PoolSource::original_train ? "original" : "merged";
}

PoolSource parse_pool_source(const std::string& text) {
  if (text == "original") return PoolSource::original_train;
  if (text == "merged") return PoolSource::current_train;
  throw InputError("unknown pool source '" + text + "' (expected original or merged)");
}

void EvolveConfig::validate() const {
  augmentation.validate();
  classifier.validate();
  if (dim < 1) throw InputError("feature dimension must be at least 1");
  if (per_graph < 1) throw InputError("per_graph must be at least 1");
}

namespace {

template <typename T>
std::vector<T> gather(const std::vector<T>& items, const std::vector<std::size_t>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(items.at(i));
  return out;
}

}  // namespace

EvolutionReport m_evolve(const GraphDataset& ds, const Split& split, const EvolveConfig& cfg,
                         std::uint64_t seed) {
  cfg.validate();
  if (split.train.empty() || split.val.empty() || split.test.empty()) {
    throw InputError("m_evolve needs nonempty train, validation and test parts");
  }
  const std::size_t classes = ds.class_count();

  std::vector<Graph> train_graphs = gather(ds.graphs, split.train);
  std::vector<ClassLabel> train_labels = gather(ds.labels, split.train);
  const std::vector<ClassLabel> val_labels = gather(ds.labels, split.val);
  const std::vector<ClassLabel> test_labels = gather(ds.labels, split.test);

  std::vector<FeatureVector> train_features = extract_features(train_graphs, cfg.features, cfg.dim);
  const auto val_features = extract_features(gather(ds.graphs, split.val), cfg.features, cfg.dim);
  const auto test_features = extract_features(gather(ds.graphs, split.test), cfg.features, cfg.dim);

  const std::size_t original_train_size = train_graphs.size();
  Model model = fit(train_features, train_labels, classes, cfg.classifier);
  EvolutionReport report;
  report.baseline_val_accuracy = accuracy(model, val_features, val_labels);
  report.baseline_test_accuracy = accuracy(model, test_features, test_labels);

  for (std::size_t t = 0; t < cfg.iterations; ++t) {
    const std::size_t sources = cfg.pool_source == PoolSource::original_train
                                    ? original_train_size
                                    : train_graphs.size();
    const auto pool = augment_pool(std::span(train_graphs).first(sources),
                                   std::span(train_labels).first(sources), cfg.augmentation,
                                   cfg.per_graph, derive_seed(seed, t));

    const ConfusionMatrix q = confusion_matrix(model, val_features, val_labels);
    const auto val_r = reliabilities(model, q, val_features, val_labels);
    std::vector<bool> correct(val_features.size());
    for (std::size_t i = 0; i < val_features.size(); ++i) {
      correct[i] = model.predict(val_features[i]) == val_labels[i];
    }
    const double theta = find_threshold(val_r, correct);

    const auto pool_features = extract_features(pool.graphs, cfg.features, cfg.dim);
    const auto accepted = filter_pool(model, q, pool_features, pool.labels, theta);
    for (std::size_t i : accepted) {
      train_graphs.push_back(pool.graphs[i]);
      train_labels.push_back(pool.labels[i]);
      train_features.push_back(pool_features[i]);
    }

    model = fit(train_features, train_labels, classes, cfg.classifier);

    IterationRecord rec;
    rec.pool_size = pool.graphs.size();
    rec.failed_augmentations = pool.failed;
    rec.accepted = accepted.size();
    rec.train_size = train_graphs.size();
    rec.threshold = theta;
    rec.val_accuracy = accuracy(model, val_features, val_labels);
    rec.test_accuracy = accuracy(model, test_features, test_labels);
    report.iterations.push_back(rec);
  }

  report.final_val_accuracy = accuracy(model, val_features, val_labels);
  report.final_test_accuracy = accuracy(model, test_features, test_labels);
  report.final_model = std::move(model);
  return report;
}

}  // namespace mevolve
