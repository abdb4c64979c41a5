#include "mregress/simulate.hpp"

#include <cmath>

namespace mregress {

namespace {

// Orthonormal pair spanning the complement of a unit vector in R^3,
// deterministic in mu (seeded off the least-aligned coordinate axis).
void complement_basis_s2(const Eigen::Vector3d& mu, Eigen::Vector3d& e1,
                         Eigen::Vector3d& e2) {
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(mu[i]) < std::abs(mu[axis])) axis = i;
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  a[axis] = 1.0;
  e1 = (a - mu.dot(a) * mu).normalized();
  e2 = mu.cross(e1);
}

Eigen::MatrixXd polar_factor(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

void check_mean_matrix(const Eigen::MatrixXd& m_mat, double kappa) {
  if (m_mat.rows() < 1 || m_mat.cols() < 1 || m_mat.rows() < m_mat.cols())
    throw InvalidArgument("mean matrix must be m x k with 1 <= k <= m");
  if (kappa < 0.0 || !std::isfinite(kappa))
    throw InvalidArgument("concentration must be finite and >= 0");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m_mat);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (!(sv[0] > 0.0) || sv[sv.size() - 1] < 1e-10 * sv[0])
    throw InvalidArgument("mean matrix is rank deficient");
}

}  // namespace

SpherePoint sample_vmf(const SpherePoint& mu, double kappa, Rng& rng) {
  if (mu.dim() != 2)
    throw InvalidArgument("closed-form vMF sampler is specific to S^2");
  if (kappa < 0.0 || !std::isfinite(kappa))
    throw InvalidArgument("concentration must be finite and >= 0");
  double u = rng.uniform_pos();
  double w = kappa > 0.0
                 ? 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * kappa)) / kappa
                 : 2.0 * u - 1.0;
  w = std::min(1.0, std::max(-1.0, w));
  double phi = 2.0 * M_PI * rng.uniform();
  Eigen::Vector3d m = mu.coords();
  Eigen::Vector3d e1, e2;
  complement_basis_s2(m, e1, e2);
  double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  Eigen::Vector3d y = s * (std::cos(phi) * e1 + std::sin(phi) * e2) + w * m;
  return SpherePoint(y / y.norm());
}

Eigen::VectorXd sample_vmf_direction(const Eigen::VectorXd& direction,
                                     double kappa, Rng& rng) {
  const int d = static_cast<int>(direction.size());
  if (d < 1) throw InvalidArgument("direction must have dimension >= 1");
  if (std::abs(direction.norm() - 1.0) > 1e-10)
    throw InvalidArgument("direction must be unit length");
  if (kappa < 0.0 || !std::isfinite(kappa))
    throw InvalidArgument("concentration must be finite and >= 0");

  if (d == 1) {
    // Two-point sphere: P(y = +1) = 1 / (1 + exp(-2 kappa mu)).
    double p = 1.0 / (1.0 + std::exp(-2.0 * kappa * direction[0]));
    Eigen::VectorXd y(1);
    y[0] = rng.uniform() < p ? 1.0 : -1.0;
    return y;
  }

  // Rejection on the cosine w against the mean direction with a Beta envelope
  // (Wood 1994); exact for every d >= 2 and kappa >= 0.
  const double dm1 = d - 1.0;
  double b = dm1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dm1 * dm1));
  double x0 = (1.0 - b) / (1.0 + b);
  double c = kappa * x0 + dm1 * std::log(1.0 - x0 * x0);
  double w;
  for (;;) {
    double z = rng.beta(0.5 * dm1, 0.5 * dm1);
    double u = rng.uniform_pos();
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    if (kappa * w + dm1 * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }

  // Uniform tangent direction orthogonal to the mean.
  Eigen::VectorXd xi;
  for (;;) {
    Eigen::VectorXd g = rng.gaussian_vector(d);
    xi = g - direction.dot(g) * direction;
    double n = xi.norm();
    if (n > 1e-12) {
      xi /= n;
      break;
    }
  }
  Eigen::VectorXd y =
      w * direction + std::sqrt(std::max(0.0, 1.0 - w * w)) * xi;
  return y / y.norm();
}

SphereSimData simulate_sphere_regression(const SphereSimConfig& config) {
  if (config.n < 1) throw InvalidArgument("need at least one observation");
  if (config.kappa < 0.0) throw InvalidArgument("concentration must be >= 0");
  Rng rng(config.seed);
  Eigen::Vector3d beta(rng.normal(), rng.normal(), rng.normal());

  Eigen::MatrixXd cov(config.n, 3);
  std::vector<ManifoldPoint> responses;
  std::vector<SpherePoint> means;
  responses.reserve(config.n);
  means.reserve(config.n);
  int i = 0;
  while (i < config.n) {
    Eigen::Vector3d x;
    x[0] = rng.normal();
    x[1] = rng.normal();
    x[2] = x[0] * x[1];
    Eigen::Vector3d v = beta.cwiseProduct(x);
    double nrm = v.norm();
    if (nrm < 1e-12) continue;  // degenerate direction: redraw the covariate
    SpherePoint mu(v / nrm);
    responses.push_back(sample_vmf(mu, config.kappa, rng));
    means.push_back(std::move(mu));
    cov.row(i) = x.transpose();
    ++i;
  }
  return SphereSimData{
      Dataset(std::move(cov), std::move(responses), ManifoldSpec::sphere(2)),
      std::move(means), beta};
}

Eigen::MatrixXd sample_uniform_stiefel(int m, int k, Rng& rng) {
  if (k < 1 || m < k) throw InvalidArgument("need 1 <= k <= m");
  Eigen::MatrixXd g = rng.gaussian_matrix(m, k);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
  Eigen::MatrixXd r = qr.matrixQR().topRows(k);
  for (int j = 0; j < k; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

StiefelPoint sample_matrix_vmf(const Eigen::MatrixXd& m_mat, double kappa,
                               Rng& rng, MatrixVmfStats* stats) {
  check_mean_matrix(m_mat, kappa);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m_mat);
  double nuclear = svd.singularValues().sum();

  MatrixVmfStats local;
  MatrixVmfStats& st = stats ? *stats : local;
  const long long max_proposals = 2000000;
  while (st.proposals < max_proposals) {
    ++st.proposals;
    Eigen::MatrixXd y = sample_uniform_stiefel(
        static_cast<int>(m_mat.rows()), static_cast<int>(m_mat.cols()), rng);
    double log_accept = kappa * ((m_mat.array() * y.array()).sum() - nuclear);
    if (std::log(rng.uniform_pos()) < log_accept) {
      ++st.accepts;
      return StiefelPoint(std::move(y));
    }
  }
  throw NonConvergence(
      "matrix vMF rejection sampler exceeded its proposal budget; "
      "use the Gibbs sampler for concentrated targets");
}

StiefelPoint sample_matrix_vmf_gibbs(const Eigen::MatrixXd& m_mat, double kappa,
                                     Rng& rng, int sweeps) {
  check_mean_matrix(m_mat, kappa);
  if (sweeps < 1) throw InvalidArgument("need at least one Gibbs sweep");
  const int m = static_cast<int>(m_mat.rows());
  const int k = static_cast<int>(m_mat.cols());

  Eigen::MatrixXd y = polar_factor(m_mat);  // start at the mode
  Eigen::MatrixXd rest(m, k - 1);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int j = 0; j < k; ++j) {
      // Orthonormal basis of the complement of the other columns.
      Eigen::MatrixXd comp;
      if (k == 1) {
        comp = Eigen::MatrixXd::Identity(m, m);
      } else {
        int c = 0;
        for (int l = 0; l < k; ++l)
          if (l != j) rest.col(c++) = y.col(l);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(rest);
        comp = (qr.householderQ() * Eigen::MatrixXd::Identity(m, m))
                   .rightCols(m - k + 1);
      }
      // Conditional of column j is a vector vMF in complement coordinates.
      Eigen::VectorXd drift = kappa * (comp.transpose() * m_mat.col(j));
      double strength = drift.norm();
      Eigen::VectorXd z;
      if (strength < 1e-300) {
        for (;;) {
          z = rng.gaussian_vector(static_cast<int>(comp.cols()));
          double n = z.norm();
          if (n > 1e-12) {
            z /= n;
            break;
          }
        }
      } else {
        z = sample_vmf_direction(drift / strength, strength, rng);
      }
      y.col(j) = comp * z;
    }
  }
  return StiefelPoint(polar_factor(y));  // shed accumulated roundoff
}

GrassmannSimData simulate_grassmann_process(const GrassmannSimConfig& config) {
  if (config.n1 < 1 || config.n2 < 1)
    throw InvalidArgument("both segments need at least one observation");
  if (config.m < 5)
    throw InvalidArgument("process needs ambient dimension >= 5");
  if (config.kappa < 0.0) throw InvalidArgument("concentration must be >= 0");

  Rng rng(config.seed);
  const int n = config.n1 + config.n2;
  Eigen::MatrixXd cov(n, 1);
  std::vector<ManifoldPoint> responses;
  std::vector<int> dims;
  responses.reserve(n);
  dims.reserve(n);

  for (int t = 1; t <= n; ++t) {
    Eigen::MatrixXd x = rng.gaussian_matrix(config.m, 5);
    const int k = t <= config.n1 ? 4 : 5;
    const double td = t;
    Eigen::MatrixXd mu(config.m, k);
    mu.col(0) = x.col(0).array() + td;
    mu.col(1) = td - x.col(1).array();
    mu.col(2) = x.col(2).array() + td * td;
    mu.col(3) = td * x.col(3);
    if (k == 5) mu.col(4) = td * x.col(4).array() + td;

    StiefelPoint frame =
        sample_matrix_vmf_gibbs(mu, config.kappa, rng, config.gibbs_sweeps);
    responses.push_back(GrassmannPoint(frame.frame()));
    dims.push_back(k);
    cov(t - 1, 0) = td;
  }
  return GrassmannSimData{Dataset(std::move(cov), std::move(responses),
                                  ManifoldSpec::grassmann_mixed(config.m)),
                          std::move(dims)};
}

}  // namespace mregress
