#include "mregress/regression.hpp"

#include <cmath>

namespace mregress {

namespace {

double clamp_cos(double c) { return std::min(1.0, std::max(-1.0, c)); }

}  // namespace

Dataset::Dataset(Eigen::MatrixXd covariates, std::vector<ManifoldPoint> responses,
                 ManifoldSpec manifold)
    : covariates_(std::move(covariates)),
      responses_(std::move(responses)),
      manifold_(manifold) {
  const int n = static_cast<int>(covariates_.rows());
  if (n < 1) throw InvalidArgument("dataset needs at least one observation");
  if (static_cast<int>(responses_.size()) != n)
    throw DimensionMismatch("covariate rows and response count differ");
  embedded_.resize(n, manifold_.ambient_dim());
  for (int i = 0; i < n; ++i) {
    if (!matches(manifold_, responses_[i]))
      throw DimensionMismatch("response " + std::to_string(i) +
                              " does not belong to " + manifold_.describe());
    embedded_.row(i) = embed(manifold_, responses_[i]).transpose();
  }
}

Dataset::Dataset(Eigen::MatrixXd covariates, std::vector<ManifoldPoint> responses,
                 ManifoldSpec manifold, Eigen::MatrixXd embedded)
    : covariates_(std::move(covariates)),
      responses_(std::move(responses)),
      manifold_(manifold),
      embedded_(std::move(embedded)) {}

Dataset Dataset::subset(const std::vector<int>& indices) const {
  if (indices.empty()) throw InvalidArgument("dataset subset cannot be empty");
  Eigen::MatrixXd cov(indices.size(), covariate_dim());
  Eigen::MatrixXd emb(indices.size(), embedded_.cols());
  std::vector<ManifoldPoint> resp;
  resp.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    int i = indices[r];
    if (i < 0 || i >= n()) throw InvalidArgument("subset index out of range");
    cov.row(r) = covariates_.row(i);
    emb.row(r) = embedded_.row(i);
    resp.push_back(responses_[i]);
  }
  return Dataset(std::move(cov), std::move(resp), manifold_, std::move(emb));
}

Prediction extrinsic_kernel_predict(const Dataset& data, const FitConfig& config,
                                    const Eigen::VectorXd& query) {
  Eigen::VectorXd raw =
      kernel_weights(config.kernel, config.bandwidth, query, data.covariates());
  Eigen::VectorXd w = normalize_weights(raw);
  AmbientVector ambient = data.embedded().transpose() * w;
  return Prediction{project(data.manifold(), ambient), std::move(ambient),
                    raw.sum()};
}

std::vector<Eigen::VectorXi> multi_indices(int m, int degree) {
  if (m < 1 || degree < 0) throw InvalidArgument("bad multi-index parameters");
  std::vector<Eigen::VectorXi> out;
  Eigen::VectorXi cur = Eigen::VectorXi::Zero(m);
  // All exponent vectors with |k| = total, first coordinate high to low.
  auto emit = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == m - 1) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[pos] = e;
      self(self, pos + 1, remaining - e);
    }
  };
  for (int total = 0; total <= degree; ++total) emit(emit, 0, total);
  return out;
}

Eigen::VectorXd local_polynomial_ambient(const Eigen::MatrixXd& covariates,
                                         const Eigen::MatrixXd& targets,
                                         const Eigen::VectorXd& weights,
                                         const Eigen::VectorXd& query, int degree) {
  const int n = static_cast<int>(covariates.rows());
  const int m = static_cast<int>(covariates.cols());
  if (targets.rows() != n || weights.size() != n)
    throw DimensionMismatch("covariates, targets and weights disagree on n");
  if (query.size() != m)
    throw DimensionMismatch("query dimension does not match covariates");

  const std::vector<Eigen::VectorXi> basis = multi_indices(m, degree);
  const int nb = static_cast<int>(basis.size());
  Eigen::MatrixXd design(n, nb);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd d = covariates.row(i).transpose() - query;
    for (int t = 0; t < nb; ++t) {
      double v = 1.0;
      for (int j = 0; j < m; ++j)
        for (int e = 0; e < basis[t][j]; ++e) v *= d[j];
      design(i, t) = v;
    }
  }
  Eigen::VectorXd sw = weights.cwiseSqrt();
  Eigen::MatrixXd a = sw.asDiagonal() * design;
  Eigen::MatrixXd b = sw.asDiagonal() * targets;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < nb)
    throw RankDeficientDesign(
        "local polynomial design is rank deficient: too few distinct "
        "neighbors for degree " +
        std::to_string(degree));
  Eigen::MatrixXd beta = qr.solve(b);  // nb x D
  return beta.row(0).transpose();
}

Prediction local_polynomial_predict(const Dataset& data, const FitConfig& config,
                                    const Eigen::VectorXd& query) {
  Eigen::VectorXd raw =
      kernel_weights(config.kernel, config.bandwidth, query, data.covariates());
  Eigen::VectorXd w = normalize_weights(raw);
  AmbientVector intercept = local_polynomial_ambient(
      data.covariates(), data.embedded(), w, query, config.degree);
  return Prediction{project(data.manifold(), intercept), std::move(intercept),
                    raw.sum()};
}

double weighted_median_objective(const Eigen::MatrixXd& points,
                                 const Eigen::VectorXd& weights,
                                 const Eigen::VectorXd& y) {
  double obj = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    obj += weights[i] * (points.row(i).transpose() - y).norm();
  return obj;
}

Eigen::VectorXd weighted_geometric_median(const Eigen::MatrixXd& points,
                                          const Eigen::VectorXd& weights,
                                          double rel_tol, int max_iters,
                                          std::vector<double>* objective_trace) {
  const int n = static_cast<int>(points.rows());
  if (n < 1) throw InvalidArgument("median needs at least one point");
  if (weights.size() != n)
    throw DimensionMismatch("median weights do not match point count");
  Eigen::VectorXd w = normalize_weights(weights);

  Eigen::VectorXd y = points.transpose() * w;  // weighted mean start
  double obj = weighted_median_objective(points, w, y);
  if (objective_trace) objective_trace->push_back(obj);

  for (int iter = 0; iter < max_iters; ++iter) {
    Eigen::VectorXd pull = Eigen::VectorXd::Zero(points.cols());
    double inv_sum = 0.0;   // sum of w_i / d_i over non-coincident points
    double anchor_w = 0.0;  // weight sitting exactly at the iterate
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd diff = points.row(i).transpose() - y;
      double d = diff.norm();
      if (d < 1e-12) {
        anchor_w += w[i];
      } else {
        pull += (w[i] / d) * diff;
        inv_sum += w[i] / d;
      }
    }
    if (inv_sum == 0.0) return y;  // every point coincides with the iterate
    double pull_norm = pull.norm();
    // At a data point the iterate is optimal once the pull of the remaining
    // mass is dominated by the local weight.
    if (anchor_w > 0.0 && pull_norm <= anchor_w) return y;

    Eigen::VectorXd next =
        anchor_w == 0.0
            ? Eigen::VectorXd(y + pull / inv_sum)
            : Eigen::VectorXd(y + ((pull_norm - anchor_w) / inv_sum) *
                                      (pull / pull_norm));
    double next_obj = weighted_median_objective(points, w, next);
    if (objective_trace) objective_trace->push_back(next_obj);
    if (obj - next_obj <= rel_tol * std::max(obj, 1e-300))
      return next_obj <= obj ? next : y;
    y = std::move(next);
    obj = next_obj;
  }
  throw NonConvergence("Weiszfeld iteration hit the iteration cap");
}

Prediction extrinsic_median_predict(const Dataset& data, const FitConfig& config,
                                    const Eigen::VectorXd& query) {
  Eigen::VectorXd raw =
      kernel_weights(config.kernel, config.bandwidth, query, data.covariates());
  Eigen::VectorXd w = normalize_weights(raw);
  AmbientVector median = weighted_geometric_median(data.embedded(), w);
  return Prediction{project(data.manifold(), median), std::move(median),
                    raw.sum()};
}

Prediction intrinsic_sphere_predict(const Dataset& data, const KernelSpec& kernel,
                                    const Bandwidth& bw,
                                    const IntrinsicConfig& config,
                                    const Eigen::VectorXd& query,
                                    std::vector<double>* objective_trace) {
  if (data.manifold().kind() != ManifoldKind::Sphere)
    throw InvalidArgument("intrinsic descent is only implemented on the sphere");
  if (!(config.step_size > 0.0) || !(config.tolerance > 0.0) || config.max_iters < 1)
    throw InvalidArgument("bad intrinsic descent configuration");

  Eigen::VectorXd raw = kernel_weights(kernel, bw, query, data.covariates());
  Eigen::VectorXd w = normalize_weights(raw);
  // Start from the extrinsic solution.
  AmbientVector mean = data.embedded().transpose() * w;
  Eigen::VectorXd y =
      std::get<SpherePoint>(project(data.manifold(), mean)).coords();

  const int n = data.n();
  for (int iter = 0;; ++iter) {
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(y.size());
    double obj = 0.0;
    for (int i = 0; i < n; ++i) {
      double c = clamp_cos(y.dot(data.embedded().row(i).transpose()));
      if (c <= -1.0 + 1e-12)
        throw AntipodalError("descent iterate became antipodal to a data point");
      double theta = std::acos(c);
      double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      double f = s < 1e-12 ? 1.0 : theta / s;
      dir += (2.0 * w[i] * f) *
             (data.embedded().row(i).transpose() - c * y);
      obj += w[i] * theta * theta;
    }
    if (objective_trace) objective_trace->push_back(obj);
    if (dir.norm() < config.tolerance) break;
    if (iter >= config.max_iters) {
      if (config.strict)
        throw NonConvergence("intrinsic descent hit the iteration cap");
      break;
    }
    Eigen::VectorXd tangent = dir - y.dot(dir) * y;  // shed tangency drift
    y = sphere_exp(SpherePoint(y), config.step_size * tangent).coords();
  }
  return Prediction{SpherePoint(y), y, raw.sum()};
}

Prediction predict_one(const Dataset& data, const FitConfig& config,
                       const Eigen::VectorXd& query) {
  if (config.degree < 0) throw InvalidArgument("polynomial degree must be >= 0");
  if (config.estimator == EstimatorKind::Median) {
    if (config.degree != 0)
      throw InvalidArgument("median estimator has no polynomial degree");
    return extrinsic_median_predict(data, config, query);
  }
  if (config.degree >= 1) return local_polynomial_predict(data, config, query);
  return extrinsic_kernel_predict(data, config, query);
}

std::vector<BatchEntry> predict_batch(const Dataset& data, const FitConfig& config,
                                      const std::vector<Eigen::VectorXd>& queries) {
  std::vector<BatchEntry> out;
  out.reserve(queries.size());
  for (const auto& q : queries) {
    try {
      out.push_back(BatchEntry{predict_one(data, config, q), {}});
    } catch (const Error& e) {
      out.push_back(BatchEntry{std::nullopt, e.what()});
    }
  }
  return out;
}

int grassmann_dim_estimate(const AmbientVector& ambient_matrix) {
  const int m = static_cast<int>(std::llround(std::sqrt(double(ambient_matrix.size()))));
  if (static_cast<Eigen::Index>(m) * m != ambient_matrix.size())
    throw DimensionMismatch("ambient vector is not a flattened square matrix");
  Eigen::MatrixXd s = unflatten_real(ambient_matrix, m, m);
  Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw ProjectionError("eigendecomposition failed in dimension estimate");
  Eigen::VectorXd desc = es.eigenvalues().reverse();
  return detail::subspace_dim_rule(desc, sym.trace());
}

}  // namespace mregress
