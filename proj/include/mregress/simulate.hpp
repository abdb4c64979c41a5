#pragma once

#include <cstdint>

#include "mregress/regression.hpp"
#include "mregress/rng.hpp"

namespace mregress {

// ---- von Mises-Fisher on S^2 -------------------------------------------------
//
// Density proportional to exp(kappa mu^T y).  Sampled by the closed-form
// inverse CDF of the cosine against the mean direction,
//   w = 1 + log(u + (1 - u) e^{-2 kappa}) / kappa,
// a uniform azimuth, and rotation of the pole onto mu.  kappa = 0 is uniform.
SpherePoint sample_vmf(const SpherePoint& mu, double kappa, Rng& rng);

// General-dimension directional sampler (exact rejection scheme on the cosine
// with a Beta envelope); needed internally by the Gibbs sampler below and
// exposed for testing.  direction must be unit length; dim >= 1.
Eigen::VectorXd sample_vmf_direction(const Eigen::VectorXd& direction,
                                     double kappa, Rng& rng);

// ---- sphere regression model -------------------------------------------------
//
// Covariates: x1, x2 independent standard normal, x3 = x1 * x2.  The noiseless
// response direction is the normalized coordinatewise product beta . x with
// beta drawn N(0, I_3) once per dataset; observations are vMF around it.
// Draws where |beta . x| has norm < 1e-12 are rejected and redrawn.
struct SphereSimConfig {
  int n = 0;
  double kappa = 1.0;
  std::uint64_t seed = 0;
};

struct SphereSimData {
  Dataset data;
  std::vector<SpherePoint> means;  // noiseless directions, matched to rows
  Eigen::Vector3d beta;
};

SphereSimData simulate_sphere_regression(const SphereSimConfig& config);

// ---- matrix von Mises-Fisher on the Stiefel manifold ------------------------
//
// Density proportional to exp(kappa tr(M^T Y)) over orthonormal m x k frames.

struct MatrixVmfStats {
  long long proposals = 0;
  long long accepts = 0;
  double acceptance_rate() const {
    return proposals > 0 ? double(accepts) / double(proposals) : 0.0;
  }
};

// Exact rejection sampler: uniform Stiefel proposals (sign-fixed QR of a
// Gaussian matrix) accepted with probability
//   exp(kappa (tr(M^T Y) - sum_j sigma_j(M))).
// Exact but only practical when kappa * ||M||_* is modest (the acceptance
// rate decays like exp(-kappa ||M||_*)); intended for moderate concentration
// around roughly orthonormal mean matrices.  M must have full column rank.
StiefelPoint sample_matrix_vmf(const Eigen::MatrixXd& m_mat, double kappa,
                               Rng& rng, MatrixVmfStats* stats = nullptr);

// Gibbs sampler for the same density: each column in turn is redrawn from its
// exact conditional, a vector vMF on the unit sphere of the orthogonal
// complement of the remaining columns.  Initialized at the polar factor of M;
// cost is deterministic in the number of sweeps, which makes it usable at the
// high concentrations the rejection sampler cannot reach.
StiefelPoint sample_matrix_vmf_gibbs(const Eigen::MatrixXd& m_mat, double kappa,
                                     Rng& rng, int sweeps = 30);

// ---- Grassmann-valued time series -------------------------------------------
//
// For t = 1..n1+n2 draw X ~ N(0,1)^{m x 5} entrywise and assemble the mean
// frame columns
//   mu1 = t + X.col(0),  mu2 = t - X.col(1),  mu3 = t^2 + X.col(2),
//   mu4 = t * X.col(3),  and for t > n1 additionally  mu5 = t + t * X.col(4);
// the response is the span of a matrix-vMF draw around mu with concentration
// kappa, so the subspace dimension jumps from 4 to 5 at t = n1 + 1.
struct GrassmannSimConfig {
  int n1 = 50;
  int n2 = 50;
  double kappa = 1.0;
  int m = 5;  // ambient space dimension, >= 5
  std::uint64_t seed = 0;
  int gibbs_sweeps = 30;
};

struct GrassmannSimData {
  Dataset data;            // covariate t (single column), Grassmann responses
  std::vector<int> dims;   // true subspace dimension per row
};

GrassmannSimData simulate_grassmann_process(const GrassmannSimConfig& config);

// Uniform (Haar) orthonormal frame, via sign-fixed thin QR of a Gaussian.
Eigen::MatrixXd sample_uniform_stiefel(int m, int k, Rng& rng);

}  // namespace mregress
