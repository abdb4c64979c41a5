#include <doctest.h>

#include <cmath>

#include "mregress/manifold.hpp"
#include "mregress/rng.hpp"

using namespace mregress;

namespace {

Eigen::VectorXd unit(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v / v.norm();
}

// Independent check that `candidate` is no farther from `ambient` than a
// cloud of competitors obtained by perturbing and re-projecting.
double image_distance(const ManifoldSpec& spec, const AmbientVector& ambient,
                      const ManifoldPoint& p) {
  return (ambient - embed(spec, p)).norm();
}

}  // namespace

TEST_CASE("flatten round trips are row major") {
  Eigen::MatrixXd a(2, 3);
  a << 1, 2, 3, 4, 5, 6;
  AmbientVector v = flatten_real(a);
  CHECK(v.size() == 6);
  CHECK(v[0] == 1);
  CHECK(v[1] == 2);  // row-major: second entry is a(0,1)
  CHECK(v[3] == 4);
  CHECK(unflatten_real(v, 2, 3) == a);

  Eigen::MatrixXcd c(1, 2);
  c(0, 0) = {1.0, -2.0};
  c(0, 1) = {3.0, 4.0};
  AmbientVector w = flatten_complex(c);
  CHECK(w.size() == 4);
  CHECK(w[0] == 1);
  CHECK(w[1] == -2);
  CHECK(w[2] == 3);
  CHECK(w[3] == 4);
  CHECK(unflatten_complex(w, 1, 2) == c);
}

TEST_CASE("manifold specs validate and report ambient dimensions") {
  CHECK(ManifoldSpec::sphere(2).ambient_dim() == 3);
  CHECK(ManifoldSpec::planar_shape(5).ambient_dim() == 50);
  CHECK(ManifoldSpec::stiefel(2, 4).ambient_dim() == 8);
  CHECK(ManifoldSpec::grassmann(2, 4).ambient_dim() == 16);
  CHECK(ManifoldSpec::grassmann_mixed(6).ambient_dim() == 36);
  CHECK(!ManifoldSpec::grassmann_mixed(6).fixed_subspace_dim());
  CHECK(ManifoldSpec::grassmann(2, 4).fixed_subspace_dim());

  CHECK_THROWS_AS(ManifoldSpec::sphere(0), InvalidArgument);
  CHECK_THROWS_AS(ManifoldSpec::planar_shape(2), InvalidArgument);
  CHECK_THROWS_AS(ManifoldSpec::stiefel(5, 4), InvalidArgument);
  CHECK_THROWS_AS(ManifoldSpec::grassmann(0, 4), InvalidArgument);
  CHECK_THROWS_AS(ManifoldSpec::grassmann_mixed(0), InvalidArgument);
}

TEST_CASE("point constructors enforce their invariants") {
  CHECK_THROWS_AS(SpherePoint(Eigen::Vector3d(1, 1, 0)), InvalidArgument);
  CHECK_NOTHROW(SpherePoint(unit({1, 1, 0})));

  Eigen::MatrixXd bad(3, 2);
  bad << 1, 1, 0, 0, 0, 0;
  CHECK_THROWS_AS(StiefelPoint{bad}, InvalidArgument);
  CHECK_THROWS_AS(GrassmannPoint{bad}, InvalidArgument);
  Eigen::MatrixXd good(3, 2);
  good << 1, 0, 0, 1, 0, 0;
  CHECK_NOTHROW(StiefelPoint{good});
  CHECK_NOTHROW(GrassmannPoint{good});

  // Preshape must be centered and unit length.
  Eigen::VectorXcd off(3);
  off << std::complex<double>(1, 0), std::complex<double>(1, 0),
      std::complex<double>(1, 0);
  CHECK_THROWS_AS(PlanarShape{off}, InvalidArgument);
}

TEST_CASE("planar shape representatives are phase canonical") {
  Eigen::VectorXcd z(3);
  z << std::complex<double>(1, 0), std::complex<double>(-0.5, 0.5),
      std::complex<double>(-0.5, -0.5);
  z /= z.norm();
  PlanarShape base{z};
  // Multiplying by any unit phase yields the identical stored representative.
  std::complex<double> phase = std::polar(1.0, 1.234);
  PlanarShape rotated{Eigen::VectorXcd(phase * z)};
  CHECK((base.preshape() - rotated.preshape()).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(base.preshape()[0].imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(base.preshape()[0].real() > 0);
}

TEST_CASE("shape_from_landmarks centers, scales and mods out similarity") {
  Eigen::VectorXcd z(4);
  z << std::complex<double>(0, 0), std::complex<double>(2, 0),
      std::complex<double>(2, 1), std::complex<double>(0, 1);
  PlanarShape s = shape_from_landmarks(z);
  CHECK(std::abs(s.preshape().sum()) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.preshape().norm() == doctest::Approx(1.0));

  // Similarity transforms of the landmarks give the same shape.
  std::complex<double> rot = std::polar(3.0, -0.7);
  Eigen::VectorXcd moved =
      (rot * z).eval() + Eigen::VectorXcd::Constant(4, {5.0, -2.0});
  ManifoldSpec spec = ManifoldSpec::planar_shape(4);
  // arccos near 1 turns an O(eps) inner-product error into an O(sqrt(eps))
  // angle, so the comparison tolerance is loose.
  CHECK(intrinsic_distance(spec, s, shape_from_landmarks(moved)) < 1e-7);

  CHECK_THROWS_AS(shape_from_landmarks(Eigen::VectorXcd::Constant(
                      3, std::complex<double>(2.0, 1.0))),
                  InvalidArgument);
  CHECK_THROWS_AS(shape_from_landmarks(Eigen::VectorXcd::Ones(2)),
                  InvalidArgument);
}

TEST_CASE("sphere embedding, projection and distance") {
  ManifoldSpec spec = ManifoldSpec::sphere(2);
  SpherePoint p{unit({3, 4, 0})};
  AmbientVector e = embed(spec, p);
  CHECK(e[0] == doctest::Approx(0.6));
  CHECK(e[1] == doctest::Approx(0.8));

  AmbientVector off(3);
  off << 3, 4, 0;
  auto proj = std::get<SpherePoint>(project(spec, off));
  CHECK((proj.coords() - p.coords()).norm() ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(project(spec, AmbientVector::Zero(3)), ProjectionError);

  SpherePoint q{unit({0, 1, 0})};
  // angle between (3,4,0)/5 and e2: cos = 0.8
  CHECK(intrinsic_distance(spec, p, q) == doctest::Approx(std::acos(0.8)));
  CHECK(intrinsic_distance(spec, p, p) == doctest::Approx(0.0));
}

TEST_CASE("sphere log and exp") {
  SpherePoint e1{unit({1, 0, 0})};
  SpherePoint e2{unit({0, 1, 0})};
  Eigen::VectorXd v = sphere_log(e1, e2);
  CHECK(v[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(M_PI / 2));
  CHECK(v[2] == doctest::Approx(0.0).epsilon(1e-14));

  SpherePoint back = sphere_exp(e1, v);
  CHECK((back.coords() - e2.coords()).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));

  // log at the base point is zero; exp of zero returns the base.
  CHECK(sphere_log(e1, e1).norm() == doctest::Approx(0.0));
  CHECK((sphere_exp(e1, Eigen::Vector3d::Zero().eval()).coords() -
         e1.coords())
            .norm() == doctest::Approx(0.0));

  SpherePoint anti{unit({-1, 0, 0})};
  CHECK_THROWS_AS(sphere_log(e1, anti), AntipodalError);
  Eigen::VectorXd not_tangent(3);
  not_tangent << 0.5, 1, 0;
  CHECK_THROWS_AS(sphere_exp(e1, not_tangent), InvalidArgument);

  // Round trip on random pairs: exp(base, log(base, t)) == t and the log norm
  // equals the great-circle distance.
  Rng rng(41);
  ManifoldSpec spec = ManifoldSpec::sphere(3);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd a = rng.gaussian_matrix(4, 1).col(0).normalized();
    Eigen::VectorXd b = rng.gaussian_matrix(4, 1).col(0).normalized();
    SpherePoint pa{a}, pb{b};
    Eigen::VectorXd w = sphere_log(pa, pb);
    CHECK(std::abs(w.dot(a)) < 1e-10);
    CHECK(w.norm() == doctest::Approx(intrinsic_distance(spec, pa, pb)));
    CHECK((sphere_exp(pa, w).coords() - b).norm() < 1e-10);
  }
}

TEST_CASE("planar shape projection recovers the top eigenshape") {
  ManifoldSpec spec = ManifoldSpec::planar_shape(4);
  Rng rng(7);

  for (int trial = 0; trial < 25; ++trial) {
    // Random centered preshape plus ambient noise.
    Eigen::VectorXcd raw(4);
    for (int i = 0; i < 4; ++i) raw[i] = {rng.normal(), rng.normal()};
    PlanarShape s = shape_from_landmarks(raw);
    AmbientVector noisy =
        embed(spec, s) + 0.05 * rng.gaussian_matrix(32, 1).col(0);
    auto p = std::get<PlanarShape>(project(spec, noisy));

    // The projection is a critical point: slightly rotating the preshape
    // toward any competitor must not get closer to the ambient input.
    double best = image_distance(spec, noisy, p);
    for (int c = 0; c < 20; ++c) {
      Eigen::VectorXcd dir(4);
      for (int i = 0; i < 4; ++i) dir[i] = {rng.normal(), rng.normal()};
      dir.array() -= dir.mean();
      Eigen::VectorXcd cand = s.preshape() + 0.2 * rng.uniform() * dir;
      cand.array() -= cand.mean();
      cand /= cand.norm();
      CHECK(best <= image_distance(spec, noisy, PlanarShape{cand}) + 1e-12);
    }
  }
}

TEST_CASE("planar shape projection of an embedded point is the identity") {
  ManifoldSpec spec = ManifoldSpec::planar_shape(6);
  Rng rng(9);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXcd raw(6);
    for (int i = 0; i < 6; ++i) raw[i] = {rng.normal(), rng.normal()};
    PlanarShape s = shape_from_landmarks(raw);
    auto back = std::get<PlanarShape>(project(spec, embed(spec, s)));
    CHECK(intrinsic_distance(spec, s, back) ==
          doctest::Approx(0.0).epsilon(1e-8));
  }
}

TEST_CASE("stiefel projection is the polar factor") {
  ManifoldSpec spec = ManifoldSpec::stiefel(2, 4);
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    // Build A = Q * S with Q orthonormal and S symmetric positive definite;
    // the polar factor of A is exactly Q.
    Eigen::MatrixXd g = rng.gaussian_matrix(4, 2);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(4, 2);
    Eigen::MatrixXd b = rng.gaussian_matrix(2, 2);
    Eigen::MatrixXd spd =
        b * b.transpose() + Eigen::MatrixXd::Identity(2, 2);
    auto p = std::get<StiefelPoint>(project(spec, flatten_real(q * spd)));
    CHECK((p.frame() - q).norm() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK((p.frame().transpose() * p.frame() -
           Eigen::MatrixXd::Identity(2, 2))
              .norm() < 1e-12);
  }
  // Rank-deficient input has no unique polar factor.
  Eigen::MatrixXd rank1 = Eigen::MatrixXd::Zero(4, 2);
  rank1.col(0).setOnes();
  CHECK_THROWS_AS(project(spec, flatten_real(rank1)), ProjectionError);
}

TEST_CASE("grassmann embedding ignores the choice of basis") {
  ManifoldSpec spec = ManifoldSpec::grassmann(2, 4);
  Rng rng(13);
  Eigen::MatrixXd g = rng.gaussian_matrix(4, 2);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd x = qr.householderQ() * Eigen::MatrixXd::Identity(4, 2);
  double c = std::cos(0.9), s = std::sin(0.9);
  Eigen::MatrixXd rot(2, 2);
  rot << c, -s, s, c;
  GrassmannPoint p{x}, q{(x * rot).eval()};
  CHECK((embed(spec, p) - embed(spec, q)).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(intrinsic_distance(spec, p, q) == doctest::Approx(0.0));
}

TEST_CASE("grassmann projection matches a direct eigendecomposition") {
  ManifoldSpec spec = ManifoldSpec::grassmann(2, 5);
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::MatrixXd a = rng.gaussian_matrix(5, 5);
    AmbientVector v = flatten_real(a);
    auto p = std::get<GrassmannPoint>(project(spec, v));

    Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    Eigen::MatrixXd top = es.eigenvectors().rightCols(2);  // ascending order
    Eigen::MatrixXd expected = top * top.transpose();
    CHECK((unflatten_real(embed(spec, p), 5, 5) - expected).norm() ==
          doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("grassmann distance handles unequal dimensions") {
  ManifoldSpec spec = ManifoldSpec::grassmann_mixed(4);
  Eigen::MatrixXd x1(4, 1), x2(4, 2);
  x1 << 1, 0, 0, 0;
  x2 << 1, 0, 0, 1, 0, 0, 0, 0;
  GrassmannPoint a{x1}, b{x2};
  // ||P1 - P2||_F where P2 - P1 is the e2 projector.
  CHECK(intrinsic_distance(spec, a, b) == doctest::Approx(1.0));
}

TEST_CASE("subspace dimension rule") {
  Eigen::VectorXd eigs(5);
  eigs << 1.02, 0.97, 0.93, 0.07, 0.01;
  CHECK(detail::subspace_dim_rule(eigs, eigs.sum()) == 3);

  // Trace just over the rounding boundary still follows round().
  Eigen::VectorXd e2(4);
  e2 << 1.0, 1.0, 0.51, 0.0;
  CHECK(detail::subspace_dim_rule(e2, 2.51) == 3);
  CHECK(detail::subspace_dim_rule(e2, 2.49) == 2);

  // Degenerate gap at the cut: falls back to counting eigenvalues >= 1/2.
  Eigen::VectorXd flat(4);
  flat << 0.6, 0.6, 0.6, 0.6;
  CHECK(detail::subspace_dim_rule(flat, 2.0) == 4);

  Eigen::VectorXd tiny(3);
  tiny << 0.1, 0.05, 0.0;
  CHECK_THROWS_AS(detail::subspace_dim_rule(tiny, 0.15), ProjectionError);
  CHECK_THROWS_AS(detail::subspace_dim_rule(tiny, 3.6), ProjectionError);
}

TEST_CASE("mixed grassmann projection infers the dimension from the trace") {
  ManifoldSpec spec = ManifoldSpec::grassmann_mixed(5);
  Rng rng(19);
  for (int k = 1; k <= 4; ++k) {
    Eigen::MatrixXd g = rng.gaussian_matrix(5, k);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd x = qr.householderQ() * Eigen::MatrixXd::Identity(5, k);
    Eigen::MatrixXd proj = x * x.transpose();
    // Mild symmetric noise keeps the trace near k and the gap comfortable.
    Eigen::MatrixXd noise = rng.gaussian_matrix(5, 5);
    noise = 0.01 * (noise + noise.transpose());
    auto p = std::get<GrassmannPoint>(project(spec, flatten_real(proj + noise)));
    CHECK(p.subspace_dim() == k);
  }
}

TEST_CASE("unembed validates membership in the image") {
  ManifoldSpec spec = ManifoldSpec::sphere(2);
  AmbientVector good = unit({1, 2, 2});
  CHECK_NOTHROW(unembed(spec, good));
  AmbientVector off(3);
  off << 1, 1, 1;
  CHECK_THROWS_AS(unembed(spec, off), InvalidArgument);

  ManifoldSpec gspec = ManifoldSpec::grassmann(1, 3);
  Eigen::MatrixXd x(3, 1);
  x << 0, 1, 0;
  CHECK_NOTHROW(unembed(gspec, embed(gspec, GrassmannPoint{x})));
  CHECK_THROWS_AS(unembed(gspec, AmbientVector::Ones(9)), InvalidArgument);
}

TEST_CASE("distance and embed reject mismatched specs") {
  ManifoldSpec s2 = ManifoldSpec::sphere(2);
  SpherePoint p{unit({1, 0, 0})};
  SpherePoint q4{unit({1, 0, 0, 0, 0})};
  CHECK_THROWS_AS(intrinsic_distance(s2, p, q4), DimensionMismatch);
  CHECK_THROWS_AS(embed(s2, ManifoldPoint{q4}), DimensionMismatch);
  Eigen::MatrixXd x(3, 1);
  x << 1, 0, 0;
  CHECK_THROWS_AS(embed(s2, ManifoldPoint{GrassmannPoint{x}}),
                  DimensionMismatch);
}
