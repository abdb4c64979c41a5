#pragma once

#include <complex>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mregress/errors.hpp"

namespace mregress {

// Points live on one of four embedded manifolds.  Every manifold comes with a
// fixed embedding J into a real ambient space R^D; regression happens on the
// ambient side and results are projected back onto the image J(M).
//
//   Sphere(d)        unit vectors in R^{d+1}; J = inclusion, D = d+1.
//   PlanarShape(k)   k >= 3 planar landmarks modulo translation/scale/rotation,
//                    stored as a centered unit "preshape" u in C^k; J(u) = u u*
//                    (k x k Hermitian), D = 2 k^2 (real/imag interleaved).
//   Stiefel(k, m)    orthonormal k-frames, m x k matrices; J = inclusion
//                    (row-major flatten), D = m k.
//   Grassmann(k, m)  k-dim subspaces of R^m via orthonormal basis X;
//                    J = X X^T (projection matrix), D = m^2.  The subspace
//                    dimension may be left unspecified, in which case
//                    projection infers it from the trace.

using AmbientVector = Eigen::VectorXd;

// Row-major flattening so printed matrices read in the usual order.
AmbientVector flatten_real(const Eigen::MatrixXd& a);
Eigen::MatrixXd unflatten_real(const AmbientVector& v, int rows, int cols);
// Complex matrices interleave (re, im) per entry, still row-major.
AmbientVector flatten_complex(const Eigen::MatrixXcd& a);
Eigen::MatrixXcd unflatten_complex(const AmbientVector& v, int rows, int cols);

enum class ManifoldKind { Sphere, PlanarShape, Stiefel, Grassmann };

class ManifoldSpec {
 public:
  static ManifoldSpec sphere(int d);            // S^d, d >= 1
  static ManifoldSpec planar_shape(int k);      // k >= 3 landmarks
  static ManifoldSpec stiefel(int k, int m);    // 1 <= k <= m
  static ManifoldSpec grassmann(int k, int m);  // fixed subspace dimension
  static ManifoldSpec grassmann_mixed(int m);   // dimension inferred per point

  ManifoldKind kind() const { return kind_; }
  int ambient_dim() const;

  int sphere_dim() const { return a_; }           // d
  int landmark_count() const { return a_; }       // k
  int frame_count() const { return a_; }          // k (Stiefel)
  int subspace_dim() const { return a_; }         // k (Grassmann; -1 if inferred)
  int space_dim() const { return b_; }            // m (Stiefel / Grassmann)
  bool fixed_subspace_dim() const { return a_ > 0; }

  bool operator==(const ManifoldSpec& o) const {
    return kind_ == o.kind_ && a_ == o.a_ && b_ == o.b_;
  }
  bool operator!=(const ManifoldSpec& o) const { return !(*this == o); }

  std::string describe() const;

 private:
  ManifoldSpec(ManifoldKind kind, int a, int b) : kind_(kind), a_(a), b_(b) {}
  ManifoldKind kind_;
  int a_;  // d | k | k | k (-1 when inferred)
  int b_;  // unused | unused | m | m
};

class SpherePoint {
 public:
  explicit SpherePoint(Eigen::VectorXd coords);  // requires ||coords|| = 1
  const Eigen::VectorXd& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()) - 1; }

 private:
  Eigen::VectorXd coords_;
};

// Centered unit preshape.  The representative is canonicalized so that the
// first coordinate with modulus > 1e-12 is real and positive; this makes
// serialization and equality checks deterministic without changing the shape.
class PlanarShape {
 public:
  explicit PlanarShape(Eigen::VectorXcd preshape);
  const Eigen::VectorXcd& preshape() const { return preshape_; }
  int landmark_count() const { return static_cast<int>(preshape_.size()); }

 private:
  Eigen::VectorXcd preshape_;
};

class StiefelPoint {
 public:
  explicit StiefelPoint(Eigen::MatrixXd frame);  // requires X^T X = I_k
  const Eigen::MatrixXd& frame() const { return frame_; }
  int space_dim() const { return static_cast<int>(frame_.rows()); }
  int frame_count() const { return static_cast<int>(frame_.cols()); }

 private:
  Eigen::MatrixXd frame_;
};

// Subspace given by an orthonormal basis; any other basis of the same span is
// the same point (distances and embeddings only see X X^T).
class GrassmannPoint {
 public:
  explicit GrassmannPoint(Eigen::MatrixXd basis);  // requires X^T X = I_k
  const Eigen::MatrixXd& basis() const { return basis_; }
  int space_dim() const { return static_cast<int>(basis_.rows()); }
  int subspace_dim() const { return static_cast<int>(basis_.cols()); }

 private:
  Eigen::MatrixXd basis_;
};

using ManifoldPoint =
    std::variant<SpherePoint, PlanarShape, StiefelPoint, GrassmannPoint>;

// True when the point's type and sizes are compatible with the spec.
bool matches(const ManifoldSpec& spec, const ManifoldPoint& p);

// J(p) as a flat real vector of length spec.ambient_dim().
AmbientVector embed(const ManifoldSpec& spec, const ManifoldPoint& p);

// Nearest point of the embedded image J(M) to an arbitrary ambient vector,
// in the ambient Euclidean metric.  Closed forms:
//   Sphere     radial normalization (zero vector -> ProjectionError);
//   PlanarShape top eigenvector of the Hermitian part, compressed to the
//              centered subspace (top eigenvalue tie -> ProjectionError);
//   Stiefel    polar factor U V^T of the SVD (rank-deficient -> ProjectionError);
//   Grassmann  span of the top-k eigenvectors of the symmetric part, with k
//              fixed by the spec or inferred from round(trace) (eigenvalue tie
//              at the cut -> ProjectionError).
ManifoldPoint project(const ManifoldSpec& spec, const AmbientVector& ambient);

// Inverse of embed on the image: validates the ambient vector actually lies on
// J(M) (within 1e-8 relative) and returns the corresponding point.
ManifoldPoint unembed(const ManifoldSpec& spec, const AmbientVector& ambient);

// Geodesic / comparison distance between two points of the same manifold:
//   Sphere      great-circle angle  arccos(<a, b>)
//   PlanarShape arccos(|<u_a, u_b>|)  (full Procrustes-type angle)
//   Stiefel     Frobenius distance ||A - B||_F of the frames
//   Grassmann   ||A A^T - B B^T||_F, defined for unequal subspace dimensions.
double intrinsic_distance(const ManifoldSpec& spec, const ManifoldPoint& a,
                          const ManifoldPoint& b);

// Tangent-space maps on the sphere, used by the intrinsic descent baseline.
// sphere_log(base, target) is the tangent vector at base pointing to target
// with ||log|| equal to the great-circle distance; antipodal pairs throw
// AntipodalError.  sphere_exp requires a tangent orthogonal to base (within
// 1e-8) and follows the geodesic for ||t|| radians.
Eigen::VectorXd sphere_log(const SpherePoint& base, const SpherePoint& target);
SpherePoint sphere_exp(const SpherePoint& base, const Eigen::VectorXd& tangent);

// Center, rescale and canonicalize raw planar landmarks (as complex numbers).
// Throws InvalidArgument when fewer than 3 landmarks or all landmarks coincide.
PlanarShape shape_from_landmarks(const Eigen::VectorXcd& landmarks);

namespace detail {
// Subspace-dimension rule shared by Grassmann projection and the regression
// side estimator: round(trace) half away from zero, falling back to counting
// eigenvalues >= 1/2 when the spectral gap at the cut is below tolerance.
// eigs_desc holds the eigenvalues in descending order.  Throws ProjectionError
// when the estimate leaves [1, m].
int subspace_dim_rule(const Eigen::VectorXd& eigs_desc, double trace);
}  // namespace detail

}  // namespace mregress
