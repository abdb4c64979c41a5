#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mregress/kernel.hpp"
#include "mregress/manifold.hpp"

namespace mregress {

// Covariates in R^m paired with manifold-valued responses.  The embedded
// responses (one ambient row per observation) are computed once up front;
// every estimator works off that cache.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd covariates, std::vector<ManifoldPoint> responses,
          ManifoldSpec manifold);

  int n() const { return static_cast<int>(covariates_.rows()); }
  int covariate_dim() const { return static_cast<int>(covariates_.cols()); }
  const Eigen::MatrixXd& covariates() const { return covariates_; }
  const std::vector<ManifoldPoint>& responses() const { return responses_; }
  const ManifoldSpec& manifold() const { return manifold_; }
  const Eigen::MatrixXd& embedded() const { return embedded_; }  // n x D

  // New dataset holding the selected rows (indices may repeat; all in range).
  Dataset subset(const std::vector<int>& indices) const;

 private:
  Dataset(Eigen::MatrixXd covariates, std::vector<ManifoldPoint> responses,
          ManifoldSpec manifold, Eigen::MatrixXd embedded);

  Eigen::MatrixXd covariates_;
  std::vector<ManifoldPoint> responses_;
  ManifoldSpec manifold_;
  Eigen::MatrixXd embedded_;
};

enum class EstimatorKind { Mean, Median };

struct FitConfig {
  KernelSpec kernel = KernelSpec::gaussian();
  Bandwidth bandwidth;
  int degree = 0;  // 0 = kernel-weighted mean, >= 1 = local polynomial
  EstimatorKind estimator = EstimatorKind::Mean;

  explicit FitConfig(Bandwidth bw) : bandwidth(std::move(bw)) {}
};

// Gradient descent settings for the intrinsic sphere baseline.
struct IntrinsicConfig {
  double step_size = 0.01;
  double tolerance = 1e-3;  // stop when the descent direction norm drops below
  int max_iters = 10000;
  // strict: hitting the iteration cap throws NonConvergence.  When false the
  // current iterate is returned instead — every step only ever lowered the
  // objective, so it is a usable (if unpolished) estimate.  Bandwidth search
  // over many fits runs non-strict so one slow query cannot discard a whole
  // bandwidth.
  bool strict = true;
};

struct Prediction {
  ManifoldPoint point;
  // The ambient estimate before projection (for the mean estimators this is
  // the weighted average / local-polynomial intercept).
  AmbientVector ambient_pre_projection;
  // Sum of the raw (unnormalized) kernel weights at the query.
  double effective_n = 0.0;
};

// Kernel-weighted embedded mean followed by projection.
Prediction extrinsic_kernel_predict(const Dataset& data, const FitConfig& config,
                                    const Eigen::VectorXd& query);

// Local polynomial of the configured degree fit coordinatewise in the ambient
// space; the intercept is projected.  Degree 0 coincides with the kernel
// estimator.  Throws RankDeficientDesign when the weighted design loses rank
// (too few distinct neighbors for the requested degree).
Prediction local_polynomial_predict(const Dataset& data, const FitConfig& config,
                                    const Eigen::VectorXd& query);

// Kernel-weighted geometric median (Weiszfeld) of the embedded responses,
// then projection.
Prediction extrinsic_median_predict(const Dataset& data, const FitConfig& config,
                                    const Eigen::VectorXd& query);

// Intrinsic competitor on the sphere: gradient descent on the weighted
// Frechet objective sum_i w_i d(y, y_i)^2, started at the extrinsic estimate.
// The step direction at y is  sum_i 2 w_i (acos(c_i)/sqrt(1-c_i^2)) (y_i - c_i y),
// c_i = <y, y_i>; the iterate moves by exp_y(step_size * direction) until the
// direction norm falls below the tolerance.  An iterate antipodal to a data
// point throws AntipodalError; hitting max_iters throws NonConvergence under
// config.strict and otherwise returns the current iterate.  When
// objective_trace is given it receives the objective at each iterate.
Prediction intrinsic_sphere_predict(const Dataset& data, const KernelSpec& kernel,
                                    const Bandwidth& bw,
                                    const IntrinsicConfig& config,
                                    const Eigen::VectorXd& query,
                                    std::vector<double>* objective_trace = nullptr);

// Dispatch on config (degree / estimator kind).
Prediction predict_one(const Dataset& data, const FitConfig& config,
                       const Eigen::VectorXd& query);

// Per-query outcome for batch prediction: exactly one of prediction/error is
// set, in the same order as the queries.
struct BatchEntry {
  std::optional<Prediction> prediction;
  std::string error;
};

std::vector<BatchEntry> predict_batch(const Dataset& data, const FitConfig& config,
                                      const std::vector<Eigen::VectorXd>& queries);

// Multi-index exponents {k : 0 <= |k| <= degree} over m coordinates in graded
// lexicographic order; the constant term comes first.
std::vector<Eigen::VectorXi> multi_indices(int m, int degree);

// The ambient solver behind local_polynomial_predict: weighted least squares
// of the target columns on the polynomial basis in (x_i - query), returning
// the intercept row.  Exposed for direct testing against dense oracles.
Eigen::VectorXd local_polynomial_ambient(const Eigen::MatrixXd& covariates,
                                         const Eigen::MatrixXd& targets,
                                         const Eigen::VectorXd& weights,
                                         const Eigen::VectorXd& query, int degree);

// Weighted geometric median of row vectors by the Weiszfeld iteration with the
// standard fix at data points (stay when the pull of the others is dominated
// by the local weight, otherwise step along the residual).  Stops when the
// relative objective decrease is below rel_tol; throws NonConvergence at
// max_iters.  objective_trace (optional) receives the objective per iterate.
Eigen::VectorXd weighted_geometric_median(const Eigen::MatrixXd& points,
                                          const Eigen::VectorXd& weights,
                                          double rel_tol = 1e-10,
                                          int max_iters = 10000,
                                          std::vector<double>* objective_trace = nullptr);

double weighted_median_objective(const Eigen::MatrixXd& points,
                                 const Eigen::VectorXd& weights,
                                 const Eigen::VectorXd& y);

// Estimated subspace dimension of a symmetric m x m ambient matrix (flattened):
// round(trace) half away from zero, falling back to counting eigenvalues
// >= 1/2 when the spectral gap at the cut is degenerate.  Throws
// ProjectionError when the estimate leaves [1, m].
int grassmann_dim_estimate(const AmbientVector& ambient_matrix);

}  // namespace mregress
