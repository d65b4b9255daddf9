// Acceptance suite: one PASS/FAIL line per criterion, every tolerance fixed here.
// usage: acceptance <mevolve-cli> <MUTAG-dir>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mevolve/augmentation.hpp"
#include "mevolve/classify.hpp"
#include "mevolve/dataset.hpp"
#include "mevolve/evolve.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace mevolve;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double value) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

struct Env {
  fs::path cli;
  fs::path data_dir;
  fs::path work;
};

int run_cli(const Env& env, const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = quote(env.cli.string()) + " " + args + " > " +
                          quote(stdout_file.string()) + " 2> " +
                          quote(stdout_file.string() + ".err");
  return std::system(cmd.c_str());
}

std::string dataset_flags(const Env& env) {
  return "--dataset-dir " + quote(env.data_dir.string()) + " --dataset MUTAG";
}

// 1. stats output and runtime
Outcome dataset_fidelity(const Env& env) {
  const auto start = Clock::now();
  const fs::path out = env.work / "stats.txt";
  if (run_cli(env, "stats " + dataset_flags(env), out) != 0) return {false, "stats exited nonzero"};
  const double elapsed = seconds_since(start);
  std::istringstream in(slurp(out));
  std::string line;
  double d = -1, y = -1, v = -1, e = -1, bias = -1;
  while (std::getline(in, line)) {
    // "<key> ... <value>": first and last tokens
    std::istringstream fields(line);
    std::string key, token, last;
    fields >> key;
    while (fields >> token) last = token;
    const double value = std::strtod(last.c_str(), nullptr);
    if (key == "|D|") d = value;
    if (key == "|Y|") y = value;
    if (key == "Avg.|V|") v = value;
    if (key == "Avg.|E|") e = value;
    if (key == "bias") bias = value;
  }
  // Recompute the means at full precision from the parsed dataset as well.
  const auto stats = dataset_stats(load_tu_dataset(env.data_dir, "MUTAG"));
  Outcome o;
  o.pass = d == 188 && y == 2 && std::abs(v - 17.93) <= 0.01 && std::abs(e - 19.79) <= 0.01 &&
           std::abs(bias - 66.5) <= 0.1 && std::abs(stats.mean_vertices - 17.93) <= 0.01 &&
           std::abs(stats.mean_edges - 19.79) <= 0.01 && elapsed < 5.0;
  o.detail = "|D|=" + fmt("%.0f", d) + " |Y|=" + fmt("%.0f", y) + " Avg|V|=" +
             fmt("%.4f", stats.mean_vertices) + " Avg|E|=" + fmt("%.4f", stats.mean_edges) +
             " bias=" + fmt("%.1f%%", bias) + " in " + fmt("%.3f s", elapsed) + " (limit 5 s)";
  return o;
}

bool simple_graph_ok(const Graph& g) {
  std::set<Edge> seen;
  for (const Edge& e : g.edges()) {
    if (e.u >= e.v || e.v >= g.vertex_count() || !seen.insert(e).second) return false;
  }
  return true;
}

// 2. structure preservation over >= 1000 returned graphs per mapping
Outcome structure_preservation(const Env& env) {
  const auto ds = load_tu_dataset(env.data_dir, "MUTAG");
  const auto start = Clock::now();
  Outcome o;
  for (auto mapping : {MappingKind::random, MappingKind::motif_similarity}) {
    AugmentationConfig cfg;
    cfg.mapping = mapping;
    std::size_t returned = 0, attempts = 0, bad = 0;
    for (std::uint64_t k = 0; returned < 1000; ++k) {
      const Graph& g = ds.graphs[k % ds.size()];
      Rng rng(derive_seed(2024, static_cast<std::uint64_t>(mapping), k));
      ++attempts;
      const auto out = augment(g, cfg, rng);
      if (!out) continue;
      ++returned;
      const bool ok = out->edge_count() == g.edge_count() &&
                      out->vertex_count() == g.vertex_count() &&
                      testing::closure_component_count(*out) == testing::closure_component_count(g) &&
                      simple_graph_ok(*out);
      bad += !ok;
    }
    o.pass = o.pass && bad == 0;
    o.detail += to_string(mapping) + ": " + std::to_string(returned) + " returned of " +
                std::to_string(attempts) + ", " + std::to_string(bad) + " violations; ";
  }
  const double elapsed = seconds_since(start);
  o.pass = o.pass && elapsed < 30.0;
  o.detail += fmt("%.2f s (limit 30 s)", elapsed);
  return o;
}

// 3. every motif swap closes an open triad of the snapshot and deletes an edge on
// one of its length-2 paths
Outcome motif_correctness(const Env&) {
  Rng gen(303);
  std::size_t swaps_checked = 0, bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + gen.below(5);
    const double p = 0.2 + 0.5 * gen.uniform();
    const Graph g = testing::random_graph(n, p, gen);
    const auto a = testing::adjacency_matrix(g);
    for (double beta : {0.15, 0.5, 0.9}) {
      Rng rng(derive_seed(303, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(beta * 100)));
      const auto swaps = plan_motif_swaps(g, swap_budget(g.edge_count(), beta),
                                          SimilarityIndex::resource_allocation, rng);
      std::set<Edge> deleted;
      for (const MotifSwap& s : swaps) {
        ++swaps_checked;
        const Vertex i = s.added.u, j = s.added.v;
        int a2 = 0;
        for (std::size_t z = 0; z < n; ++z) a2 += a[i][z] * a[z][j];
        bool on_path = false;
        for (Vertex z = 0; z < n; ++z) {
          if (!a[i][z] || !a[z][j]) continue;
          on_path = on_path || s.deleted == make_edge(i, z) || s.deleted == make_edge(z, j);
        }
        const bool ok = i != j && a[i][j] == 0 && a2 != 0 && on_path &&
                        a[s.deleted.u][s.deleted.v] == 1 && deleted.insert(s.deleted).second;
        bad += !ok;
      }
    }
  }
  return {bad == 0 && swaps_checked > 0, "200 graphs n<=7, " + std::to_string(swaps_checked) +
                                             " swaps checked, " + std::to_string(bad) + " violations"};
}

// 4. find_threshold reaches the dense-grid minimum
Outcome threshold_oracle(const Env&) {
  Rng rng(404);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<double> r(n);
    std::vector<bool> correct(n);
    // a narrow band forces ties on some instances
    const std::uint64_t lo = rng.below(100);
    const std::uint64_t width = 1 + rng.below(101 - lo);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = static_cast<double>(lo + rng.below(width)) / 100.0;  // exactly on the grid
      correct[i] = rng.uniform() < 0.7;
    }
    const double theta = find_threshold(r, correct);
    mismatches += testing::phi_objective(r, correct, theta) != testing::grid_minimum(r, correct, 10000);
  }
  return {mismatches == 0, "500 instances, size<=50, 10^4-point grid, " +
                               std::to_string(mismatches) + " mismatches"};
}

ProbVector random_distribution(std::size_t classes, Rng& rng) {
  ProbVector p(classes);
  for (double& v : p) v = -std::log(1.0 - rng.uniform());
  // occasionally one-hot, like a k-NN vote
  if (rng.below(4) == 0) std::fill(p.begin(), p.end(), 0.0), p[rng.below(classes)] = 1.0;
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= sum;
  return p;
}

// 5. Q rows, reliabilities and filter monotonicity
Outcome filtration_math(const Env& env) {
  Rng rng(505);
  double worst_row = 0.0;
  double r_min = 1.0, r_max = 0.0;
  std::size_t monotone_violations = 0;
  const auto check = [&](const ConfusionMatrix& q, const std::vector<double>& r) {
    for (const auto& row : q.rows)
      worst_row = std::max(worst_row, std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0));
    for (double v : r) {
      r_min = std::min(r_min, v);
      r_max = std::max(r_max, v);
    }
    std::vector<double> thetas(10);
    for (double& t : thetas) t = rng.uniform();
    thetas.push_back(0.0);
    thetas.insert(thetas.end(), r.begin(), r.end());
    std::sort(thetas.begin(), thetas.end());
    auto prev = accept_above(r, thetas.front());
    for (double t : thetas) {
      const auto cur = accept_above(r, t);
      if (!std::includes(prev.begin(), prev.end(), cur.begin(), cur.end())) ++monotone_violations;
      prev = cur;
    }
  };

  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t classes = 2 + rng.below(5);
    const std::size_t n = 1 + rng.below(60);
    std::vector<ProbVector> probs;
    std::vector<ClassLabel> labels;
    for (std::size_t i = 0; i < n; ++i) {
      probs.push_back(random_distribution(classes, rng));
      labels.push_back(static_cast<ClassLabel>(rng.below(classes)));
    }
    const auto q = confusion_from_probs(probs, labels, classes);
    std::vector<double> r;
    for (std::size_t i = 0; i < n; ++i) r.push_back(label_reliability(probs[i], q.row(labels[i])));
    check(q, r);
  }

  // fitted models on MUTAG splits, scored on an augmented pool
  const auto ds = load_tu_dataset(env.data_dir, "MUTAG");
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Split split = stratified_split(ds, SplitRatios{}, seed);
    for (auto kind : {ClassifierKind::knn, ClassifierKind::logreg}) {
      const auto feature_kind = seed % 2 ? FeatureKind::heat_trace : FeatureKind::spectral;
      std::vector<FeatureVector> train_x, val_x;
      std::vector<ClassLabel> train_y, val_y;
      std::vector<Graph> train_g;
      for (std::size_t i : split.train) {
        train_g.push_back(ds.graphs[i]);
        train_x.push_back(extract_features(ds.graphs[i], feature_kind, 128));
        train_y.push_back(ds.labels[i]);
      }
      for (std::size_t i : split.val) {
        val_x.push_back(extract_features(ds.graphs[i], feature_kind, 128));
        val_y.push_back(ds.labels[i]);
      }
      ClassifierSettings settings;
      settings.kind = kind;
      const Model model = fit(train_x, train_y, ds.class_count(), settings);
      const auto q = confusion_matrix(model, val_x, val_y);
      const auto pool = augment_pool(train_g, train_y, AugmentationConfig{}, 1, seed);
      const auto pool_x = extract_features(pool.graphs, feature_kind, 128);
      auto r = reliabilities(model, q, val_x, val_y);
      const auto pool_r = reliabilities(model, q, pool_x, pool.labels);
      r.insert(r.end(), pool_r.begin(), pool_r.end());
      check(q, r);
    }
  }

  const bool pass = worst_row <= 1e-9 && r_min >= 0.0 && r_max <= 1.0 && monotone_violations == 0;
  return {pass, "max |row sum - 1| = " + fmt("%.2e", worst_row) + " (limit 1e-9), r in [" +
                    fmt("%.4f", r_min) + ", " + fmt("%.4f", r_max) + "], " +
                    std::to_string(monotone_violations) + " monotonicity violations"};
}

// 6. eigenpair residuals, trace identity and the logistic gradient
Outcome numerics(const Env&) {
  Rng rng(606);
  double worst_residual = 0.0, worst_trace = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    const Graph g = testing::random_graph(n, 0.1 + 0.6 * rng.uniform(), rng);
    const auto pairs = laplacian_eigenpairs(g);
    const testing::EigenPairs as_pairs{pairs.values, pairs.vectors};
    worst_residual = std::max(worst_residual, testing::max_eigen_residual(testing::laplacian_matrix(g), as_pairs));
    const double sum = std::accumulate(pairs.values.begin(), pairs.values.end(), 0.0);
    worst_trace = std::max(worst_trace, std::abs(sum - 2.0 * static_cast<double>(g.edge_count())));
  }

  double worst_gradient = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t classes = 2 + rng.below(3);
    const std::size_t dim = 1 + rng.below(6);
    const std::size_t n = 5 + rng.below(20);
    std::vector<FeatureVector> x(n, FeatureVector(dim));
    std::vector<ClassLabel> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : x[i]) v = 4.0 * rng.uniform() - 2.0;
      y[i] = static_cast<ClassLabel>(rng.below(classes));
    }
    std::vector<double> w(classes * dim), b(classes);
    for (double& v : w) v = 2.0 * rng.uniform() - 1.0;
    for (double& v : b) v = 2.0 * rng.uniform() - 1.0;
    const double l2 = 1e-3;
    const auto obj = logistic_objective(w, b, x, y, classes, l2);
    const double h = 1e-5;
    const auto relative = [](double analytic, double numeric) {
      return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    };
    const auto probe = [&](std::vector<double>& params, std::size_t i, bool is_weight) {
      const double saved = params[i];
      params[i] = saved + h;
      const double up = logistic_objective(w, b, x, y, classes, l2).loss;
      params[i] = saved - h;
      const double down = logistic_objective(w, b, x, y, classes, l2).loss;
      params[i] = saved;
      const double analytic = is_weight ? obj.weight_gradient[i] : obj.bias_gradient[i];
      worst_gradient = std::max(worst_gradient, relative(analytic, (up - down) / (2.0 * h)));
    };
    for (std::size_t i = 0; i < w.size(); ++i) probe(w, i, true);
    for (std::size_t i = 0; i < b.size(); ++i) probe(b, i, false);
  }
  const bool pass = worst_residual <= 1e-6 && worst_trace <= 1e-6 && worst_gradient <= 1e-4;
  return {pass, "max eigen residual " + fmt("%.2e", worst_residual) + ", max trace error " +
                    fmt("%.2e", worst_trace) + " (limits 1e-6), max gradient rel. error " +
                    fmt("%.2e", worst_gradient) + " (limit 1e-4)"};
}

// 7. full protocol on MUTAG, both mappings, four (feature, classifier) cells
Outcome end_to_end(const Env& env) {
  const fs::path json = env.work / "full.json";
  const auto start = Clock::now();
  const int status = run_cli(env,
                             "run " + dataset_flags(env) +
                                 " --mapping random,motif-similarity --classifier knn,logreg"
                                 " --features spectral,heat-trace --beta 0.15 --iterations 5"
                                 " --folds 5 --repeats 10 --seed 0 --out " +
                                 quote(json.string()) + " --csv " +
                                 quote((env.work / "full.csv").string()),
                             env.work / "full.txt");
  const double elapsed = seconds_since(start);
  if (status != 0) return {false, "run exited nonzero"};
  const auto doc = nlohmann::json::parse(slurp(json));
  Outcome o;
  for (const std::string mapping : {"random", "motif-similarity"}) {
    double delta = std::nan("");
    std::size_t trials = 0;
    for (const auto& cell : doc["table"]["cells"]) {
      if (cell["mapping"] == mapping && cell["features"] == "spectral" && cell["classifier"] == "knn") {
        delta = cell["evolved_mean"].get<double>() - cell["baseline_mean"].get<double>();
        trials = cell["trials"].get<std::size_t>();
      }
    }
    const double avg = doc["table"]["average_relative_improvement"][mapping].get<double>();
    o.pass = o.pass && delta >= -0.005 && avg > 0.0 && trials == 50;
    o.detail += mapping + ": spectral+knn delta " + fmt("%+.4f", delta) + " (limit >= -0.005), avg RIMP " +
                fmt("%+.2f%%", 100.0 * avg) + " (limit > 0); ";
  }
  o.pass = o.pass && elapsed < 600.0;
  o.detail += fmt("%.1f s (limit 600 s)", elapsed);
  return o;
}

// 8. identical invocations give byte-identical reports
Outcome determinism(const Env& env) {
  const auto invoke = [&](const std::string& tag) {
    const std::string args = "run " + dataset_flags(env) +
                             " --mapping random,motif-similarity --classifier knn"
                             " --features spectral,heat-trace --repeats 2 --seed 42 --out " +
                             quote((env.work / (tag + ".json")).string()) + " --csv " +
                             quote((env.work / (tag + ".csv")).string());
    return run_cli(env, args, env.work / (tag + ".txt"));
  };
  if (invoke("det_a") != 0 || invoke("det_b") != 0) return {false, "run exited nonzero"};
  const std::string ja = slurp(env.work / "det_a.json"), jb = slurp(env.work / "det_b.json");
  const std::string ca = slurp(env.work / "det_a.csv"), cb = slurp(env.work / "det_b.csv");
  const bool pass = !ja.empty() && !ca.empty() && ja == jb && ca == cb;
  return {pass, "report " + std::to_string(ja.size()) + " bytes " + (ja == jb ? "identical" : "differ") +
                    ", summary " + std::to_string(ca.size()) + " bytes " + (ca == cb ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <mevolve-cli> <MUTAG-dir>\n";
    return 2;
  }
  Env env{fs::absolute(argv[1]), fs::absolute(argv[2]), fs::temp_directory_path() / "mevolve_acceptance"};
  fs::create_directories(env.work);

  const std::vector<std::pair<std::string, std::function<Outcome(const Env&)>>> criteria{
      {"dataset fidelity", dataset_fidelity},
      {"structure preservation", structure_preservation},
      {"motif correctness", motif_correctness},
      {"threshold oracle", threshold_oracle},
      {"filtration math", filtration_math},
      {"numerics", numerics},
      {"end-to-end reproduction", end_to_end},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second(env);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << ": " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
