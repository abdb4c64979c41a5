#include "mregress/kernel.hpp"

#include <cmath>

namespace mregress {

Bandwidth::Bandwidth(Eigen::VectorXd h) : h_(std::move(h)) {
  if (h_.size() < 1) throw InvalidArgument("bandwidth needs at least one entry");
  for (Eigen::Index j = 0; j < h_.size(); ++j)
    if (!(h_[j] > 0.0) || !std::isfinite(h_[j]))
      throw InvalidArgument("bandwidth entries must be positive and finite");
}

Bandwidth Bandwidth::isotropic(double h, int m) {
  return Bandwidth(Eigen::VectorXd::Constant(m, h));
}

Eigen::VectorXd kernel_weights(const KernelSpec& kernel, const Bandwidth& bw,
                               const Eigen::VectorXd& query,
                               const Eigen::MatrixXd& covariates) {
  const int n = static_cast<int>(covariates.rows());
  const int m = static_cast<int>(covariates.cols());
  if (query.size() != m)
    throw DimensionMismatch("query dimension does not match covariates");
  if (bw.size() != m)
    throw DimensionMismatch("bandwidth dimension does not match covariates");

  Eigen::VectorXd w(n);
  if (kernel.kind == KernelSpec::Kind::GaussianProduct) {
    const double norm = std::pow(2.0 * M_PI, -0.5 * m) / bw.det();
    for (int i = 0; i < n; ++i) {
      double q = 0.0;
      for (int j = 0; j < m; ++j) {
        double u = (covariates(i, j) - query[j]) / bw.h()[j];
        q += u * u;
      }
      w[i] = norm * std::exp(-0.5 * q);
    }
    return w;
  }

  // Mixed kernel: exact match on the binary coordinate, Gaussian-type decay
  // with an h (not h^2) exponent scale on the rest.
  const int b = kernel.binary_index;
  if (b < 0 || b >= m)
    throw InvalidArgument("mixed kernel binary index out of range");
  for (int i = 0; i < n; ++i) {
    if (covariates(i, b) != query[b]) {
      w[i] = 0.0;
      continue;
    }
    double v = 1.0;
    for (int j = 0; j < m; ++j) {
      if (j == b) continue;
      double d = covariates(i, j) - query[j];
      double h = bw.h()[j];
      v *= std::exp(-d * d / h) / (h * h);
    }
    w[i] = v;
  }
  return w;
}

Eigen::VectorXd normalize_weights(const Eigen::VectorXd& weights) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0 || !std::isfinite(weights[i]))
      throw InvalidArgument("kernel weights must be nonnegative and finite");
    total += weights[i];
  }
  if (total < 1e-300)
    throw EmptyNeighborhood("all kernel weights vanish at the query point");
  return weights / total;
}

}  // namespace mregress
