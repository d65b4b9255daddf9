#include "mevolve/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "mevolve/errors.hpp"
#include "mevolve/parallel.hpp"
#include "mevolve/rng.hpp"

namespace mevolve {

void ExperimentConfig::validate() const {
  if (mappings.empty() || classifiers.empty() || features.empty()) {
    throw InputError("at least one mapping, classifier and feature kind is required");
  }
  if (!(beta > 0.0 && beta < 1.0)) throw InputError("--beta must lie in (0, 1)");
  if (max_retries < 1) throw InputError("max retries must be at least 1");
  if (per_graph < 1) throw InputError("--per-graph must be at least 1");
  if (dim < 1) throw InputError("--dim must be at least 1");
  if (folds < 2) throw InputError("--folds must be at least 2");
  if (repeats < 1) throw InputError("--repeats must be at least 1");
  if (folds > 0xffffffffULL || repeats > 0xffffffffULL) throw InputError("too many folds or repeats");
  classifier.validate();
}

EvolveConfig ExperimentConfig::evolve_config(MappingKind mapping, ClassifierKind classifier_kind,
                                             FeatureKind feature_kind) const {
  EvolveConfig out;
  out.augmentation.mapping = mapping;
  out.augmentation.beta = beta;
  out.augmentation.max_retries = max_retries;
  out.classifier = classifier;
  out.classifier.kind = classifier_kind;
  out.features = feature_kind;
  out.dim = dim;
  out.iterations = iterations;
  out.per_graph = per_graph;
  out.pool_source = pool_source;
  return out;
}

namespace {

struct CellKey {
  MappingKind mapping;
  ClassifierKind classifier;
  FeatureKind features;
};

std::vector<CellKey> requested_cells(const ExperimentConfig& cfg) {
  std::vector<CellKey> cells;
  for (MappingKind m : cfg.mappings)
    for (FeatureKind f : cfg.features)
      for (ClassifierKind c : cfg.classifiers) cells.push_back({m, c, f});
  return cells;
}

// Fold assignment seeds live in a separate domain from trial seeds.
constexpr std::uint64_t kFoldDomain = 0x6b666f6c64ULL;

}  // namespace

ExperimentResult run_experiment(const GraphDataset& ds, const ExperimentConfig& cfg) {
  cfg.validate();
  ds.validate();
  const auto cells = requested_cells(cfg);

  std::vector<std::vector<Split>> folds;
  folds.reserve(cfg.repeats);
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    folds.push_back(kfold(ds, cfg.folds, derive_seed(cfg.seed ^ kFoldDomain, r)));
  }

  const std::size_t per_repeat = cfg.folds * cells.size();
  std::vector<TrialRecord> trials(cfg.repeats * per_repeat);
  parallel_for(trials.size(), [&](std::size_t t) {
    const std::size_t r = t / per_repeat;
    const std::size_t f = (t % per_repeat) / cells.size();
    const CellKey& cell = cells[t % cells.size()];
    const Split& split = folds[r][f];

    TrialRecord& rec = trials[t];
    rec.repeat = r;
    rec.fold = f;
    rec.seed = derive_seed(cfg.seed, r, f);
    rec.mapping = cell.mapping;
    rec.classifier = cell.classifier;
    rec.features = cell.features;
    rec.train_size = split.train.size();
    rec.val_size = split.val.size();
    rec.test_size = split.test.size();
    try {
      const auto report = m_evolve(ds, split, cfg.evolve_config(cell.mapping, cell.classifier, cell.features),
                                   rec.seed);
      rec.baseline_accuracy = report.baseline_test_accuracy;
      rec.evolved_accuracy = report.final_test_accuracy;
      rec.iterations = report.iterations;
    } catch (const std::exception& e) {
      throw TrialError(r, f, e.what());
    }
  });

  ExperimentResult result;
  result.table = summarize(ds.name, trials, cfg);
  result.trials = std::move(trials);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_experiment(load_tu_dataset(cfg.dataset_dir, cfg.dataset), cfg);
}

namespace {

std::pair<double, double> mean_and_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

}  // namespace

ResultTable summarize(const std::string& dataset, const std::vector<TrialRecord>& trials,
                      const ExperimentConfig& cfg) {
  ResultTable table;
  table.dataset = dataset;
  std::map<MappingKind, std::vector<double>> by_mapping;
  for (const CellKey& key : requested_cells(cfg)) {
    std::vector<double> base;
    std::vector<double> evolved;
    for (const TrialRecord& t : trials) {
      if (t.mapping == key.mapping && t.classifier == key.classifier && t.features == key.features) {
        base.push_back(t.baseline_accuracy);
        evolved.push_back(t.evolved_accuracy);
      }
    }
    ResultCell cell;
    cell.mapping = key.mapping;
    cell.classifier = key.classifier;
    cell.features = key.features;
    cell.trials = base.size();
    std::tie(cell.baseline_mean, cell.baseline_std) = mean_and_std(base);
    std::tie(cell.evolved_mean, cell.evolved_std) = mean_and_std(evolved);
    cell.relative_improvement =
        cell.baseline_mean > 0.0 ? (cell.evolved_mean - cell.baseline_mean) / cell.baseline_mean : 0.0;
    by_mapping[key.mapping].push_back(cell.relative_improvement);
    table.cells.push_back(cell);
  }
  for (const auto& [mapping, values] : by_mapping) {
    table.average_improvement[mapping] = mean_and_std(values).first;
  }
  return table;
}

std::string structured_report(const ExperimentResult& result, const ExperimentConfig& cfg) {
  using nlohmann::ordered_json;
  ordered_json config;
  config["dataset"] = cfg.dataset.empty() ? result.table.dataset : cfg.dataset;
  config["beta"] = cfg.beta;
  config["max_retries"] = cfg.max_retries;
  config["iterations"] = cfg.iterations;
  config["per_graph"] = cfg.per_graph;
  config["pool_source"] = to_string(cfg.pool_source);
  config["dim"] = cfg.dim;
  config["folds"] = cfg.folds;
  config["repeats"] = cfg.repeats;
  config["seed"] = cfg.seed;
  config["knn_k"] = cfg.classifier.k;
  config["learning_rate"] = cfg.classifier.learning_rate;
  config["l2"] = cfg.classifier.l2;
  config["max_epochs"] = cfg.classifier.max_epochs;

  ordered_json cells = ordered_json::array();
  for (const ResultCell& c : result.table.cells) {
    cells.push_back({{"mapping", to_string(c.mapping)},
                     {"features", to_string(c.features)},
                     {"classifier", to_string(c.classifier)},
                     {"trials", c.trials},
                     {"baseline_mean", c.baseline_mean},
                     {"baseline_std", c.baseline_std},
                     {"evolved_mean", c.evolved_mean},
                     {"evolved_std", c.evolved_std},
                     {"relative_improvement", c.relative_improvement}});
  }
  ordered_json average = ordered_json::object();
  for (const auto& [mapping, value] : result.table.average_improvement) {
    average[to_string(mapping)] = value;
  }

  ordered_json trials = ordered_json::array();
  for (const TrialRecord& t : result.trials) {
    ordered_json iterations = ordered_json::array();
    for (const IterationRecord& it : t.iterations) {
      iterations.push_back({{"pool_size", it.pool_size},
                            {"failed_augmentations", it.failed_augmentations},
                            {"accepted", it.accepted},
                            {"train_size", it.train_size},
                            {"threshold", it.threshold},
                            {"val_accuracy", it.val_accuracy},
                            {"test_accuracy", it.test_accuracy}});
    }
    trials.push_back({{"repeat", t.repeat},
                      {"fold", t.fold},
                      {"seed", t.seed},
                      {"mapping", to_string(t.mapping)},
                      {"features", to_string(t.features)},
                      {"classifier", to_string(t.classifier)},
                      {"train_size", t.train_size},
                      {"val_size", t.val_size},
                      {"test_size", t.test_size},
                      {"baseline_accuracy", t.baseline_accuracy},
                      {"evolved_accuracy", t.evolved_accuracy},
                      {"iterations", std::move(iterations)}});
  }

  ordered_json doc;
  doc["config"] = std::move(config);
  doc["table"] = {{"dataset", result.table.dataset},
                  {"cells", std::move(cells)},
                  {"average_relative_improvement", std::move(average)}};
  doc["trials"] = std::move(trials);
  return doc.dump(2) + "\n";
}

namespace {

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace

std::string summary_csv(const ResultTable& table) {
  std::ostringstream out;
  out << "dataset,mapping,features,classifier,trials,baseline_mean,baseline_std,"
         "evolved_mean,evolved_std,rimp_percent,avg_rimp_percent\n";
  for (const ResultCell& c : table.cells) {
    out << table.dataset << ',' << to_string(c.mapping) << ',' << to_string(c.features) << ','
        << to_string(c.classifier) << ',' << c.trials << ',' << fixed(c.baseline_mean, 6) << ','
        << fixed(c.baseline_std, 6) << ',' << fixed(c.evolved_mean, 6) << ','
        << fixed(c.evolved_std, 6) << ',' << fixed(100.0 * c.relative_improvement, 2) << ','
        << fixed(100.0 * table.average_improvement.at(c.mapping), 2) << '\n';
  }
  return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void emit_reports(const ExperimentResult& result, const ExperimentConfig& cfg) {
  if (!cfg.out_path.empty()) write_file(cfg.out_path, structured_report(result, cfg));
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, summary_csv(result.table));
}

std::string format_stats(const std::string& name, const DatasetStats& stats) {
  std::ostringstream out;
  out << "dataset   " << name << '\n'
      << "|D|       " << stats.graph_count << '\n'
      << "|Y|       " << stats.class_count << '\n'
      << "Avg.|V|   " << fixed(stats.mean_vertices, 2) << '\n'
      << "Avg.|E|   " << fixed(stats.mean_edges, 2) << '\n'
      << "bias (%)  " << fixed(100.0 * stats.bias, 1) << '\n';
  return out.str();
}

GraphDataset augment_dataset(const GraphDataset& ds, const AugmentationConfig& cfg,
                             std::size_t per_graph, std::uint64_t seed) {
  const auto pool = augment_pool(ds.graphs, ds.labels, cfg, per_graph, seed);
  GraphDataset out;
  out.name = ds.name;
  out.label_vocab = ds.label_vocab;
  out.graphs = pool.graphs;
  out.labels = pool.labels;
  return out;
}

}  // namespace mevolve
