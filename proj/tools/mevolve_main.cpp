// mevolve: dataset statistics, graph augmentation and the evolution experiment.
//
//   mevolve stats   --dataset-dir data/MUTAG --dataset MUTAG
//   mevolve augment --dataset-dir data/MUTAG --dataset MUTAG --mapping random --out aug/
//   mevolve run     --dataset-dir data/MUTAG --dataset MUTAG --out report.json --csv table.csv
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 runtime failure.
// MEVOLVE_WORKERS sets the number of worker threads.

#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "mevolve/errors.hpp"
#include "mevolve/experiment.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfig = 1, kData = 2, kRuntime = 3 };

struct Options {
  mevolve::ExperimentConfig cfg;
  std::vector<std::string> mappings{"motif-similarity"};
  std::vector<std::string> classifiers{"knn"};
  std::vector<std::string> features{"spectral"};
  std::string pool_source = "original";
  std::string out;
  std::string csv;
};

void add_dataset_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--dataset-dir", o.cfg.dataset_dir, "Directory holding the TU text files")
      ->required();
  cmd->add_option("--dataset", o.cfg.dataset, "Dataset name, the file prefix")->required();
}

void add_augmentation_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--mapping", o.mappings, "random and/or motif-similarity")
      ->delimiter(',')
      ->check(CLI::IsMember({"random", "motif-similarity"}));
  cmd->add_option("--beta", o.cfg.beta, "Edge modification budget")->capture_default_str();
  cmd->add_option("--per-graph", o.cfg.per_graph, "Augmented variants per graph")
      ->capture_default_str();
  cmd->add_option("--max-retries", o.cfg.max_retries, "Attempts per graph before skipping it")
      ->capture_default_str();
  cmd->add_option("--seed", o.cfg.seed, "Master seed")->capture_default_str();
}

void resolve(Options& o) {
  o.cfg.mappings.clear();
  for (const auto& m : o.mappings) o.cfg.mappings.push_back(mevolve::parse_mapping_kind(m));
  o.cfg.classifiers.clear();
  for (const auto& c : o.classifiers) o.cfg.classifiers.push_back(mevolve::parse_classifier_kind(c));
  o.cfg.features.clear();
  for (const auto& f : o.features) o.cfg.features.push_back(mevolve::parse_feature_kind(f));
  o.cfg.pool_source = mevolve::parse_pool_source(o.pool_source);
  o.cfg.out_path = o.out;
  o.cfg.csv_path = o.csv;
}

int cmd_stats(const Options& o) {
  mevolve::LoadDiagnostics diag;
  const auto ds = mevolve::load_tu_dataset(o.cfg.dataset_dir, o.cfg.dataset, &diag);
  std::cout << mevolve::format_stats(o.cfg.dataset, mevolve::dataset_stats(ds));
  if (diag.one_way_edges > 0) {
    std::cerr << "warning: " << diag.one_way_edges << " edges listed in one direction only\n";
  }
  return kOk;
}

int cmd_augment(const Options& o) {
  if (o.out.empty()) throw mevolve::InputError("augment needs --out <directory>");
  o.cfg.validate();
  const auto ds = mevolve::load_tu_dataset(o.cfg.dataset_dir, o.cfg.dataset);
  for (auto mapping : o.cfg.mappings) {
    mevolve::AugmentationConfig aug;
    aug.mapping = mapping;
    aug.beta = o.cfg.beta;
    aug.max_retries = o.cfg.max_retries;
    const auto out = mevolve::augment_dataset(ds, aug, o.cfg.per_graph, o.cfg.seed);
    const std::string name = o.cfg.dataset + "-" + mevolve::to_string(mapping);
    mevolve::write_tu_dataset(out, o.out, name);
    std::cout << name << ": " << out.size() << " augmented graphs from " << ds.size()
              << " sources written to " << o.out << '\n';
  }
  return kOk;
}

int cmd_run(const Options& o) {
  o.cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const auto result = mevolve::run_experiment(o.cfg);
  mevolve::emit_reports(result, o.cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::cout << mevolve::summary_csv(result.table);
  for (const auto& [mapping, value] : result.table.average_improvement) {
    std::cout << "Avg RIMP (" << mevolve::to_string(mapping) << "): " << 100.0 * value << "%\n";
  }
  std::cerr << result.trials.size() << " trials in " << seconds << " s\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph augmentation and model evolution for graph classification"};
  app.require_subcommand(1);
  Options o;

  auto* stats = app.add_subcommand("stats", "Print dataset statistics");
  add_dataset_flags(stats, o);

  auto* augment = app.add_subcommand("augment", "Write augmented graphs in TU format");
  add_dataset_flags(augment, o);
  add_augmentation_flags(augment, o);
  augment->add_option("--out", o.out, "Output directory");

  auto* run = app.add_subcommand("run", "Repeated cross-validated evolution experiment");
  add_dataset_flags(run, o);
  add_augmentation_flags(run, o);
  run->add_option("--iterations", o.cfg.iterations, "Evolution iterations T")->capture_default_str();
  run->add_option("--classifier", o.classifiers, "knn and/or logreg")
      ->delimiter(',')
      ->check(CLI::IsMember({"knn", "logreg"}));
  run->add_option("--features", o.features, "spectral and/or heat-trace")
      ->delimiter(',')
      ->check(CLI::IsMember({"spectral", "heat-trace"}));
  run->add_option("--pool-source", o.pool_source,
                  "Augment the original training graphs or the merged training set")
      ->check(CLI::IsMember({"original", "merged"}))
      ->capture_default_str();
  run->add_option("--dim", o.cfg.dim, "Feature dimension")->capture_default_str();
  run->add_option("--folds", o.cfg.folds, "Cross-validation folds")->capture_default_str();
  run->add_option("--repeats", o.cfg.repeats, "Cross-validation repeats")->capture_default_str();
  run->add_option("--knn-k", o.cfg.classifier.k, "Neighbours for knn")->capture_default_str();
  run->add_option("--learning-rate", o.cfg.classifier.learning_rate, "logreg step size")
      ->capture_default_str();
  run->add_option("--l2", o.cfg.classifier.l2, "logreg L2 strength")->capture_default_str();
  run->add_option("--max-epochs", o.cfg.classifier.max_epochs, "logreg epoch cap")
      ->capture_default_str();
  run->add_option("--out", o.out, "Structured report path (JSON)");
  run->add_option("--csv", o.csv, "Summary table path (CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    resolve(o);
    if (stats->parsed()) return cmd_stats(o);
    if (augment->parsed()) return cmd_augment(o);
    return cmd_run(o);
  } catch (const mevolve::InputError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const mevolve::ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const mevolve::SplitError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
