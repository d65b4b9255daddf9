#include "mevolve/classify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "mevolve/errors.hpp"
#include "mevolve/parallel.hpp"

namespace mevolve {

std::string to_string(FeatureKind kind) {
  return kind == FeatureKind::spectral ? "spectral" : "heat-trace";
}

std::string to_string(ClassifierKind kind) {
  return kind == ClassifierKind::knn ? "knn" : "logreg";
}

FeatureKind parse_feature_kind(const std::string& text) {
  if (text == "spectral") return FeatureKind::spectral;
  if (text == "heat-trace") return FeatureKind::heat_trace;
  throw InputError("unknown feature kind '" + text + "' (expected spectral or heat-trace)");
}

ClassifierKind parse_classifier_kind(const std::string& text) {
  if (text == "knn") return ClassifierKind::knn;
  if (text == "logreg") return ClassifierKind::logreg;
  throw InputError("unknown classifier '" + text + "' (expected knn or logreg)");
}

// ---------------------------------------------------------------------------
// Features

namespace {

Eigen::MatrixXd laplacian_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    laplacian(e.u, e.v) = -1.0;
    laplacian(e.v, e.u) = -1.0;
    laplacian(e.u, e.u) += 1.0;
    laplacian(e.v, e.v) += 1.0;
  }
  return laplacian;
}

}  // namespace

std::vector<double> laplacian_spectrum(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  if (n == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian_matrix(g),
                                                        Eigen::EigenvaluesOnly);
  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(values.begin(), values.end());
  return values;
}

LaplacianEigenpairs laplacian_eigenpairs(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  LaplacianEigenpairs out;
  if (n == 0) return out;
  // eigenvalues come back ascending
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian_matrix(g));
  out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto col = solver.eigenvectors().col(k);
    out.vectors.emplace_back(col.data(), col.data() + n);
  }
  return out;
}

FeatureVector spectral_features(const Graph& g, std::size_t d) {
  if (d < 1) throw InputError("feature dimension must be at least 1");
  auto values = laplacian_spectrum(g);
  values.resize(d, 0.0);
  return values;
}

double heat_trace(std::span<const double> spectrum, double t) {
  if (spectrum.empty()) return 0.0;
  double sum = 0.0;
  for (double lambda : spectrum) sum += std::exp(-t * lambda);
  return sum / static_cast<double>(spectrum.size());
}

std::vector<double> heat_trace_times(std::size_t d) {
  if (d < 1) throw InputError("feature dimension must be at least 1");
  std::vector<double> times(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double exponent =
        d == 1 ? -2.0 : -2.0 + 4.0 * static_cast<double>(k) / static_cast<double>(d - 1);
    times[k] = std::pow(10.0, exponent);
  }
  return times;
}

FeatureVector heat_trace_features(const Graph& g, std::size_t d) {
  const auto times = heat_trace_times(d);
  const auto spectrum = laplacian_spectrum(g);
  FeatureVector out(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) out[k] = heat_trace(spectrum, times[k]);
  return out;
}

FeatureVector extract_features(const Graph& g, FeatureKind kind, std::size_t d) {
  return kind == FeatureKind::spectral ? spectral_features(g, d) : heat_trace_features(g, d);
}

std::vector<FeatureVector> extract_features(std::span<const Graph> graphs, FeatureKind kind,
                                            std::size_t d) {
  std::vector<FeatureVector> out(graphs.size());
  parallel_for(graphs.size(), [&](std::size_t i) { out[i] = extract_features(graphs[i], kind, d); });
  return out;
}

// ---------------------------------------------------------------------------
// Classifiers

void ClassifierSettings::validate() const {
  if (k < 1) throw InputError("knn k must be at least 1");
  if (!(learning_rate > 0.0)) throw InputError("learning rate must be positive");
  if (!(l2 >= 0.0)) throw InputError("l2 strength must be nonnegative");
  if (max_epochs < 1) throw InputError("max_epochs must be at least 1");
}

ProbVector softmax(std::span<const double> scores) {
  if (scores.empty()) return {};
  const double top = *std::max_element(scores.begin(), scores.end());
  ProbVector p(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] - top);
    sum += p[i];
  }
  for (double& x : p) x /= sum;
  return p;
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowMatrix to_matrix(const std::vector<FeatureVector>& rows, std::size_t dim) {
  RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) throw InputError("inconsistent feature dimensions");
    for (std::size_t j = 0; j < dim; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

/// Mean cross-entropy + l2/2 ||W||^2; fills gradients. W is classes x dim.
double objective(const RowMatrix& x, std::span<const ClassLabel> y, const RowMatrix& w,
                 const Eigen::VectorXd& b, double l2, RowMatrix& grad_w, Eigen::VectorXd& grad_b) {
  const auto n = x.rows();
  const auto c = w.rows();
  RowMatrix residual = x * w.transpose();  // scores, then p - onehot in place
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double* row = residual.row(i).data();
    double top = row[0] + b(0);
    for (Eigen::Index k = 0; k < c; ++k) {
      row[k] += b(k);
      top = std::max(top, row[k]);
    }
    double norm = 0.0;
    for (Eigen::Index k = 0; k < c; ++k) {
      row[k] = std::exp(row[k] - top);
      norm += row[k];
    }
    const auto label = static_cast<Eigen::Index>(y[static_cast<std::size_t>(i)]);
    loss -= std::log(row[label] / norm);
    for (Eigen::Index k = 0; k < c; ++k) row[k] /= norm;
    row[label] -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  grad_w.noalias() = inv_n * residual.transpose() * x;
  grad_w += l2 * w;
  grad_b = inv_n * residual.colwise().sum().transpose();
  return loss * inv_n + 0.5 * l2 * w.squaredNorm();
}

void check_labels(std::span<const ClassLabel> labels, std::size_t classes) {
  for (ClassLabel y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= classes) throw InputError("label out of range");
  }
}

}  // namespace

std::vector<double> Model::standardize(std::span<const double> x) const {
  if (x.size() != mean_.size()) {
    throw InputError("feature dimension " + std::to_string(x.size()) + " does not match model " +
                     std::to_string(mean_.size()));
  }
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean_[j]) / scale_[j];
  return z;
}

ProbVector Model::predict_proba(std::span<const double> x) const {
  const auto z = standardize(x);
  if (kind_ == ClassifierKind::logreg) {
    std::vector<double> scores(classes_);
    for (std::size_t c = 0; c < classes_; ++c) {
      double s = bias_[c];
      for (std::size_t j = 0; j < z.size(); ++j) s += weights_[c * z.size() + j] * z[j];
      scores[c] = s;
    }
    return softmax(scores);
  }

  std::vector<std::pair<double, std::size_t>> dist(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      const double diff = points_[i][j] - z[j];
      s += diff * diff;
    }
    dist[i] = {s, i};
  }
  const std::size_t k = std::min(k_, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  ProbVector p(classes_, 0.0);
  for (std::size_t i = 0; i < k; ++i) p[static_cast<std::size_t>(point_labels_[dist[i].second])] += 1.0;
  for (double& v : p) v /= static_cast<double>(k);
  return p;
}

ClassLabel Model::predict(std::span<const double> x) const {
  const auto p = predict_proba(x);
  return static_cast<ClassLabel>(std::max_element(p.begin(), p.end()) - p.begin());
}

Model Model::logistic(std::size_t classes, std::size_t dim, std::vector<double> weights,
                      std::vector<double> bias) {
  if (weights.size() != classes * dim || bias.size() != classes) {
    throw InputError("logistic parameter shapes do not match classes x dim");
  }
  Model m;
  m.kind_ = ClassifierKind::logreg;
  m.classes_ = classes;
  m.mean_.assign(dim, 0.0);
  m.scale_.assign(dim, 1.0);
  m.weights_ = std::move(weights);
  m.bias_ = std::move(bias);
  return m;
}

Model fit(const std::vector<FeatureVector>& features, std::span<const ClassLabel> labels,
          std::size_t class_count, const ClassifierSettings& settings) {
  settings.validate();
  if (features.empty()) throw InputError("cannot fit on an empty training set");
  if (features.size() != labels.size()) throw InputError("features and labels differ in length");
  check_labels(labels, class_count);
  std::vector<bool> present(class_count, false);
  for (ClassLabel y : labels) present[static_cast<std::size_t>(y)] = true;
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw FitError("training set contains fewer than two classes");
  }

  const std::size_t dim = features.front().size();
  const RowMatrix raw = to_matrix(features, dim);

  Model m;
  m.kind_ = settings.kind;
  m.classes_ = class_count;
  const Eigen::RowVectorXd mean = raw.colwise().mean();
  const Eigen::RowVectorXd var = (raw.rowwise() - mean).array().square().colwise().mean();
  m.mean_.assign(mean.data(), mean.data() + dim);
  m.scale_.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double sd = std::sqrt(var(static_cast<Eigen::Index>(j)));
    m.scale_[j] = sd > 1e-12 ? sd : 1.0;
  }
  RowMatrix x = raw.rowwise() - mean;
  for (std::size_t j = 0; j < dim; ++j) x.col(static_cast<Eigen::Index>(j)) /= m.scale_[j];

  if (settings.kind == ClassifierKind::knn) {
    m.k_ = settings.k;
    m.points_.resize(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
      const auto row = x.row(static_cast<Eigen::Index>(i));
      m.points_[i].assign(row.data(), row.data() + dim);
    }
    m.point_labels_.assign(labels.begin(), labels.end());
    return m;
  }

  // Constant columns standardize to zero; their weights start at zero and their
  // gradient l2 * w stays zero, so training only needs the varying columns.
  std::vector<Eigen::Index> active;
  for (std::size_t j = 0; j < dim; ++j) {
    if (x.col(static_cast<Eigen::Index>(j)).cwiseAbs().maxCoeff() > 0.0) {
      active.push_back(static_cast<Eigen::Index>(j));
    }
  }
  const auto c = static_cast<Eigen::Index>(class_count);
  const auto d = static_cast<Eigen::Index>(active.size());
  const RowMatrix xa = x(Eigen::all, active);
  RowMatrix w = RowMatrix::Zero(c, d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(c);
  RowMatrix grad_w(c, d);
  Eigen::VectorXd grad_b(c);
  for (std::size_t epoch = 0; epoch < settings.max_epochs; ++epoch) {
    objective(xa, labels, w, b, settings.l2, grad_w, grad_b);
    const double norm = std::sqrt(grad_w.squaredNorm() + grad_b.squaredNorm());
    if (norm < settings.gradient_tolerance) break;
    w -= settings.learning_rate * grad_w;
    b -= settings.learning_rate * grad_b;
  }
  m.weights_.assign(class_count * dim, 0.0);
  for (Eigen::Index k = 0; k < c; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) {
      m.weights_[static_cast<std::size_t>(k) * dim + static_cast<std::size_t>(active[static_cast<std::size_t>(j)])] = w(k, j);
    }
  }
  m.bias_.assign(b.data(), b.data() + c);
  return m;
}

LogisticObjective logistic_objective(std::span<const double> weights,
                                     std::span<const double> bias,
                                     const std::vector<FeatureVector>& features,
                                     std::span<const ClassLabel> labels, std::size_t classes,
                                     double l2) {
  if (features.empty() || features.size() != labels.size()) {
    throw InputError("features and labels must be nonempty and of equal length");
  }
  check_labels(labels, classes);
  const std::size_t dim = features.front().size();
  if (weights.size() != classes * dim || bias.size() != classes) {
    throw InputError("logistic parameter shapes do not match classes x dim");
  }
  const RowMatrix x = to_matrix(features, dim);
  const auto c = static_cast<Eigen::Index>(classes);
  const auto d = static_cast<Eigen::Index>(dim);
  const RowMatrix w = Eigen::Map<const RowMatrix>(weights.data(), c, d);
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(bias.data(), c);
  RowMatrix grad_w(c, d);
  Eigen::VectorXd grad_b(c);
  LogisticObjective out;
  out.loss = objective(x, labels, w, b, l2, grad_w, grad_b);
  out.weight_gradient.assign(grad_w.data(), grad_w.data() + c * d);
  out.bias_gradient.assign(grad_b.data(), grad_b.data() + c);
  return out;
}

double accuracy(const Model& model, const std::vector<FeatureVector>& features,
                std::span<const ClassLabel> labels) {
  if (features.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (model.predict(features[i]) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(features.size());
}

}  // namespace mevolve
