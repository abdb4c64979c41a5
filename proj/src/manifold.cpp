#include "mregress/manifold.hpp"

#include <algorithm>
#include <cmath>

namespace mregress {

namespace {

constexpr double kUnitTol = 1e-10;       // point validation
constexpr double kEigenGapTol = 1e-9;    // relative spectral-gap tolerance
constexpr double kRankTol = 1e-10;       // relative singular-value cutoff

double clamp_cos(double c) { return std::min(1.0, std::max(-1.0, c)); }

}  // namespace

AmbientVector flatten_real(const Eigen::MatrixXd& a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  AmbientVector v(rows * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) v[i * cols + j] = a(i, j);
  return v;
}

Eigen::MatrixXd unflatten_real(const AmbientVector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols)
    throw DimensionMismatch("ambient vector length does not match matrix shape");
  Eigen::MatrixXd a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = v[i * cols + j];
  return a;
}

AmbientVector flatten_complex(const Eigen::MatrixXcd& a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  AmbientVector v(2 * rows * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      v[2 * (i * cols + j)] = a(i, j).real();
      v[2 * (i * cols + j) + 1] = a(i, j).imag();
    }
  return v;
}

Eigen::MatrixXcd unflatten_complex(const AmbientVector& v, int rows, int cols) {
  if (v.size() != 2 * static_cast<Eigen::Index>(rows) * cols)
    throw DimensionMismatch("ambient vector length does not match complex matrix shape");
  Eigen::MatrixXcd a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      a(i, j) = std::complex<double>(v[2 * (i * cols + j)],
                                     v[2 * (i * cols + j) + 1]);
  return a;
}

ManifoldSpec ManifoldSpec::sphere(int d) {
  if (d < 1) throw InvalidArgument("sphere dimension must be >= 1");
  return ManifoldSpec(ManifoldKind::Sphere, d, 0);
}

ManifoldSpec ManifoldSpec::planar_shape(int k) {
  if (k < 3) throw InvalidArgument("planar shapes need at least 3 landmarks");
  return ManifoldSpec(ManifoldKind::PlanarShape, k, 0);
}

ManifoldSpec ManifoldSpec::stiefel(int k, int m) {
  if (k < 1 || m < k) throw InvalidArgument("Stiefel needs 1 <= k <= m");
  return ManifoldSpec(ManifoldKind::Stiefel, k, m);
}

ManifoldSpec ManifoldSpec::grassmann(int k, int m) {
  if (k < 1 || m < k) throw InvalidArgument("Grassmann needs 1 <= k <= m");
  return ManifoldSpec(ManifoldKind::Grassmann, k, m);
}

ManifoldSpec ManifoldSpec::grassmann_mixed(int m) {
  if (m < 1) throw InvalidArgument("Grassmann ambient dimension must be >= 1");
  return ManifoldSpec(ManifoldKind::Grassmann, -1, m);
}

int ManifoldSpec::ambient_dim() const {
  switch (kind_) {
    case ManifoldKind::Sphere: return a_ + 1;
    case ManifoldKind::PlanarShape: return 2 * a_ * a_;
    case ManifoldKind::Stiefel: return a_ * b_;
    case ManifoldKind::Grassmann: return b_ * b_;
  }
  return 0;
}

std::string ManifoldSpec::describe() const {
  switch (kind_) {
    case ManifoldKind::Sphere: return "Sphere(" + std::to_string(a_) + ")";
    case ManifoldKind::PlanarShape:
      return "PlanarShape(" + std::to_string(a_) + ")";
    case ManifoldKind::Stiefel:
      return "Stiefel(" + std::to_string(a_) + ", " + std::to_string(b_) + ")";
    case ManifoldKind::Grassmann:
      return "Grassmann(" + (a_ > 0 ? std::to_string(a_) : std::string("?")) +
             ", " + std::to_string(b_) + ")";
  }
  return "?";
}

SpherePoint::SpherePoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw InvalidArgument("sphere point needs >= 2 coordinates");
  if (std::abs(coords_.norm() - 1.0) > kUnitTol)
    throw InvalidArgument("sphere point is not unit length");
}

PlanarShape::PlanarShape(Eigen::VectorXcd preshape) : preshape_(std::move(preshape)) {
  const int k = static_cast<int>(preshape_.size());
  if (k < 3) throw InvalidArgument("planar shape needs at least 3 landmarks");
  if (std::abs(preshape_.sum()) > kUnitTol)
    throw InvalidArgument("planar preshape is not centered");
  if (std::abs(preshape_.norm() - 1.0) > kUnitTol)
    throw InvalidArgument("planar preshape is not unit length");
  // Canonical rotation representative: first coordinate with modulus > 1e-12
  // is made real and positive.
  for (int j = 0; j < k; ++j) {
    double mod = std::abs(preshape_[j]);
    if (mod > 1e-12) {
      preshape_ *= std::conj(preshape_[j]) / mod;
      break;
    }
  }
}

namespace {

void check_orthonormal(const Eigen::MatrixXd& x, const char* what) {
  if (x.rows() < 1 || x.cols() < 1 || x.rows() < x.cols())
    throw InvalidArgument(std::string(what) + ": need m x k with 1 <= k <= m");
  Eigen::MatrixXd g = x.transpose() * x;
  g.diagonal().array() -= 1.0;
  if (g.cwiseAbs().maxCoeff() > kUnitTol)
    throw InvalidArgument(std::string(what) + ": columns are not orthonormal");
}

}  // namespace

StiefelPoint::StiefelPoint(Eigen::MatrixXd frame) : frame_(std::move(frame)) {
  check_orthonormal(frame_, "Stiefel frame");
}

GrassmannPoint::GrassmannPoint(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  check_orthonormal(basis_, "Grassmann basis");
}

bool matches(const ManifoldSpec& spec, const ManifoldPoint& p) {
  switch (spec.kind()) {
    case ManifoldKind::Sphere: {
      auto* s = std::get_if<SpherePoint>(&p);
      return s && s->dim() == spec.sphere_dim();
    }
    case ManifoldKind::PlanarShape: {
      auto* s = std::get_if<PlanarShape>(&p);
      return s && s->landmark_count() == spec.landmark_count();
    }
    case ManifoldKind::Stiefel: {
      auto* s = std::get_if<StiefelPoint>(&p);
      return s && s->space_dim() == spec.space_dim() &&
             s->frame_count() == spec.frame_count();
    }
    case ManifoldKind::Grassmann: {
      auto* s = std::get_if<GrassmannPoint>(&p);
      if (!s || s->space_dim() != spec.space_dim()) return false;
      return !spec.fixed_subspace_dim() ||
             s->subspace_dim() == spec.subspace_dim();
    }
  }
  return false;
}

AmbientVector embed(const ManifoldSpec& spec, const ManifoldPoint& p) {
  if (!matches(spec, p))
    throw DimensionMismatch("point does not belong to " + spec.describe());
  switch (spec.kind()) {
    case ManifoldKind::Sphere:
      return std::get<SpherePoint>(p).coords();
    case ManifoldKind::PlanarShape: {
      const Eigen::VectorXcd& u = std::get<PlanarShape>(p).preshape();
      Eigen::MatrixXcd outer = u * u.adjoint();
      return flatten_complex(outer);
    }
    case ManifoldKind::Stiefel:
      return flatten_real(std::get<StiefelPoint>(p).frame());
    case ManifoldKind::Grassmann: {
      const Eigen::MatrixXd& x = std::get<GrassmannPoint>(p).basis();
      return flatten_real(x * x.transpose());
    }
  }
  throw Error("unreachable");
}

namespace detail {

// Shared dimension rule for near-projection symmetric matrices: round the
// trace half away from zero; if the spectral gap at that cut is not clean,
// fall back to counting eigenvalues >= 1/2.
int subspace_dim_rule(const Eigen::VectorXd& eigs_desc, double trace) {
  const int m = static_cast<int>(eigs_desc.size());
  int k = static_cast<int>(std::llround(std::round(trace)));
  double scale = std::max(std::abs(eigs_desc[0]), std::abs(eigs_desc[m - 1]));
  bool clean = k >= 1 && k <= m;
  if (clean && k < m) {
    double gap = eigs_desc[k - 1] - eigs_desc[k];
    clean = scale > 0.0 && gap >= kEigenGapTol * scale;
  }
  if (!clean) {
    k = 0;
    for (int i = 0; i < m; ++i)
      if (eigs_desc[i] >= 0.5) ++k;
  }
  if (k < 1 || k > m)
    throw ProjectionError("estimated subspace dimension " + std::to_string(k) +
                          " is outside [1, " + std::to_string(m) + "]");
  return k;
}

}  // namespace detail

ManifoldPoint project(const ManifoldSpec& spec, const AmbientVector& ambient) {
  if (ambient.size() != spec.ambient_dim())
    throw DimensionMismatch("ambient vector has wrong length for " + spec.describe());
  switch (spec.kind()) {
    case ManifoldKind::Sphere: {
      double n = ambient.norm();
      if (!(n > 0.0) || !std::isfinite(n))
        throw ProjectionError("cannot project zero or non-finite vector onto sphere");
      return SpherePoint(ambient / n);
    }
    case ManifoldKind::PlanarShape: {
      const int k = spec.landmark_count();
      Eigen::MatrixXcd s = unflatten_complex(ambient, k, k);
      Eigen::MatrixXcd h = 0.5 * (s + s.adjoint());
      // Compress to the centered subspace: the image consists of u u* with
      // 1^T u = 0, so the maximizer of u* H u must be sought there.
      Eigen::MatrixXcd cent = Eigen::MatrixXcd::Identity(k, k);
      cent.array() -= 1.0 / k;
      h = cent * h * cent;
      h = 0.5 * (h + h.adjoint());  // absorb roundoff
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      if (es.info() != Eigen::Success)
        throw ProjectionError("eigendecomposition failed in shape projection");
      const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
      double scale = std::max(std::abs(ev[0]), std::abs(ev[k - 1]));
      if (!(scale > 0.0))
        throw ProjectionError("cannot project zero matrix onto shape space");
      if (ev[k - 1] - ev[k - 2] < kEigenGapTol * scale)
        throw ProjectionError("top eigenvalue is not simple in shape projection");
      Eigen::VectorXcd v = es.eigenvectors().col(k - 1);
      v.array() -= v.mean();  // exact recentering against roundoff
      double n = v.norm();
      if (!(n > 0.0))
        throw ProjectionError("degenerate eigenvector in shape projection");
      return PlanarShape(v / n);
    }
    case ManifoldKind::Stiefel: {
      const int m = spec.space_dim();
      const int k = spec.frame_count();
      Eigen::MatrixXd a = unflatten_real(ambient, m, k);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(
          a, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Eigen::VectorXd& sv = svd.singularValues();
      if (!(sv[0] > 0.0) || sv[k - 1] < kRankTol * sv[0])
        throw ProjectionError("rank-deficient matrix has no unique Stiefel projection");
      return StiefelPoint(svd.matrixU() * svd.matrixV().transpose());
    }
    case ManifoldKind::Grassmann: {
      const int m = spec.space_dim();
      Eigen::MatrixXd s = unflatten_real(ambient, m, m);
      Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
      if (es.info() != Eigen::Success)
        throw ProjectionError("eigendecomposition failed in Grassmann projection");
      const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
      Eigen::VectorXd desc = ev.reverse();
      int k = spec.fixed_subspace_dim()
                  ? spec.subspace_dim()
                  : detail::subspace_dim_rule(desc, sym.trace());
      double scale = std::max(std::abs(desc[0]), std::abs(desc[m - 1]));
      if (!(scale > 0.0))
        throw ProjectionError("cannot project zero matrix onto Grassmann");
      if (k < m && desc[k - 1] - desc[k] < kEigenGapTol * scale)
        throw ProjectionError("eigenvalue tie at the subspace cut");
      Eigen::MatrixXd basis(m, k);
      for (int j = 0; j < k; ++j) basis.col(j) = es.eigenvectors().col(m - 1 - j);
      return GrassmannPoint(std::move(basis));
    }
  }
  throw Error("unreachable");
}

ManifoldPoint unembed(const ManifoldSpec& spec, const AmbientVector& ambient) {
  ManifoldPoint p = project(spec, ambient);
  AmbientVector back = embed(spec, p);
  if ((back - ambient).norm() > 1e-8 * std::max(1.0, ambient.norm()))
    throw InvalidArgument("ambient vector does not lie on the embedded image of " +
                          spec.describe());
  return p;
}

double intrinsic_distance(const ManifoldSpec& spec, const ManifoldPoint& a,
                          const ManifoldPoint& b) {
  if (!matches(spec, a) || !matches(spec, b))
    throw DimensionMismatch("distance arguments do not belong to " + spec.describe());
  switch (spec.kind()) {
    case ManifoldKind::Sphere: {
      const auto& pa = std::get<SpherePoint>(a).coords();
      const auto& pb = std::get<SpherePoint>(b).coords();
      return std::acos(clamp_cos(pa.dot(pb)));
    }
    case ManifoldKind::PlanarShape: {
      const auto& ua = std::get<PlanarShape>(a).preshape();
      const auto& ub = std::get<PlanarShape>(b).preshape();
      std::complex<double> ip = ua.adjoint() * ub;
      return std::acos(clamp_cos(std::abs(ip)));
    }
    case ManifoldKind::Stiefel: {
      const auto& fa = std::get<StiefelPoint>(a).frame();
      const auto& fb = std::get<StiefelPoint>(b).frame();
      return (fa - fb).norm();
    }
    case ManifoldKind::Grassmann: {
      const auto& xa = std::get<GrassmannPoint>(a).basis();
      const auto& xb = std::get<GrassmannPoint>(b).basis();
      // ||Xa Xa^T - Xb Xb^T||_F^2 = ka + kb - 2 ||Xa^T Xb||_F^2
      double cross = (xa.transpose() * xb).squaredNorm();
      double d2 = xa.cols() + xb.cols() - 2.0 * cross;
      return std::sqrt(std::max(0.0, d2));
    }
  }
  throw Error("unreachable");
}

Eigen::VectorXd sphere_log(const SpherePoint& base, const SpherePoint& target) {
  if (base.coords().size() != target.coords().size())
    throw DimensionMismatch("sphere_log arguments have different dimensions");
  double c = clamp_cos(base.coords().dot(target.coords()));
  if (c <= -1.0 + 1e-12)
    throw AntipodalError("log map undefined for antipodal points");
  Eigen::VectorXd resid = target.coords() - c * base.coords();
  double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  if (s < 1e-15) return resid;  // coincident points: residual is already ~0
  return (std::acos(c) / s) * resid;
}

SpherePoint sphere_exp(const SpherePoint& base, const Eigen::VectorXd& tangent) {
  if (tangent.size() != base.coords().size())
    throw DimensionMismatch("sphere_exp tangent has wrong dimension");
  double theta = tangent.norm();
  if (std::abs(base.coords().dot(tangent)) > 1e-8 * std::max(1.0, theta))
    throw InvalidArgument("sphere_exp tangent is not orthogonal to the base point");
  if (theta == 0.0) return base;
  Eigen::VectorXd y =
      std::cos(theta) * base.coords() + (std::sin(theta) / theta) * tangent;
  return SpherePoint(y / y.norm());
}

PlanarShape shape_from_landmarks(const Eigen::VectorXcd& landmarks) {
  const int k = static_cast<int>(landmarks.size());
  if (k < 3) throw InvalidArgument("need at least 3 landmarks for a planar shape");
  Eigen::VectorXcd centered = landmarks.array() - landmarks.mean();
  double n = centered.norm();
  if (n <= 1e-12 * std::max(1.0, landmarks.norm()))
    throw InvalidArgument("landmarks coincide; shape is degenerate");
  return PlanarShape(centered / n);
}

}  // namespace mregress
