#pragma once

#include <Eigen/Dense>

#include "mregress/errors.hpp"

namespace mregress {

// Per-coordinate bandwidths h_1..h_m (all positive).
class Bandwidth {
 public:
  explicit Bandwidth(Eigen::VectorXd h);
  static Bandwidth isotropic(double h, int m);

  const Eigen::VectorXd& h() const { return h_; }
  int size() const { return static_cast<int>(h_.size()); }
  // |H| = product of the per-coordinate bandwidths.
  double det() const { return h_.prod(); }

 private:
  Eigen::VectorXd h_;
};

struct KernelSpec {
  enum class Kind { GaussianProduct, MixedBinaryGaussian };

  Kind kind = Kind::GaussianProduct;
  // Index of the exact-match coordinate for the mixed kernel.
  int binary_index = -1;

  static KernelSpec gaussian() { return KernelSpec{Kind::GaussianProduct, -1}; }
  static KernelSpec mixed(int binary_index) {
    return KernelSpec{Kind::MixedBinaryGaussian, binary_index};
  }
};

// Unnormalized kernel weights of each covariate row against the query point.
//
// GaussianProduct:  K_H(u) = |H|^-1 prod_j phi(u_j / h_j), phi standard normal.
// MixedBinaryGaussian: weight is 0 unless the binary coordinate matches
// exactly; otherwise prod over the remaining coordinates of
// exp(-delta_j^2 / h_j) / h_j^2.  The bandwidth entry at binary_index is
// carried but unused.  With one binary and one continuous coordinate this is
// exactly  1{b_i = b} exp(-(t_i - t)^2 / h) / h^2.
Eigen::VectorXd kernel_weights(const KernelSpec& kernel, const Bandwidth& bw,
                               const Eigen::VectorXd& query,
                               const Eigen::MatrixXd& covariates);

// Scale nonnegative weights to sum to one; throws EmptyNeighborhood when the
// total mass is below 1e-300 (all points effectively outside the window).
Eigen::VectorXd normalize_weights(const Eigen::VectorXd& weights);

}  // namespace mregress
