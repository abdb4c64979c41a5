#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mregress/model_selection.hpp"
#include "mregress/rng.hpp"

using namespace mregress;

namespace {

Dataset smooth_sphere_dataset(Rng& rng, int n, double noise) {
  Eigen::MatrixXd x(n, 1);
  std::vector<ManifoldPoint> ys;
  for (int i = 0; i < n; ++i) {
    double t = -1.0 + 2.0 * rng.uniform();
    x(i, 0) = t;
    Eigen::Vector3d mu(std::cos(t), std::sin(t), 0.0);
    Eigen::Vector3d obs = mu + noise * rng.gaussian_matrix(3, 1).col(0);
    ys.emplace_back(SpherePoint{obs.normalized()});
  }
  return Dataset{std::move(x), std::move(ys), ManifoldSpec::sphere(2)};
}

}  // namespace

TEST_CASE("fold assignment is a seeded partition with balanced sizes") {
  auto folds = make_folds(23, 5, 99);
  REQUIRE(folds.size() == 5);
  // 23 = 5+5+5+4+4: the first 23 % 5 = 3 folds get the extra element
  CHECK(folds[0].size() == 5);
  CHECK(folds[1].size() == 5);
  CHECK(folds[2].size() == 5);
  CHECK(folds[3].size() == 4);
  CHECK(folds[4].size() == 4);

  std::vector<int> seen;
  for (const auto& f : folds) seen.insert(seen.end(), f.begin(), f.end());
  std::sort(seen.begin(), seen.end());
  for (int i = 0; i < 23; ++i) CHECK(seen[i] == i);

  // deterministic in the seed, different across seeds
  CHECK(make_folds(23, 5, 99) == folds);
  CHECK(make_folds(23, 5, 100) != folds);

  // the documented shuffle: mt19937_64, j = i + rng() % (n - i)
  std::mt19937_64 gen(99);
  std::vector<int> order(23);
  for (int i = 0; i < 23; ++i) order[i] = i;
  for (int i = 0; i < 23; ++i) {
    int j = i + static_cast<int>(gen() % static_cast<std::uint64_t>(23 - i));
    std::swap(order[i], order[j]);
  }
  std::vector<int> flat;
  for (const auto& f : folds) flat.insert(flat.end(), f.begin(), f.end());
  CHECK(flat == order);

  CHECK_THROWS_AS(make_folds(5, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(make_folds(4, 5, 1), InvalidArgument);
  auto loo = make_folds(4, 4, 7);  // leave-one-out works
  CHECK(loo.size() == 4);
}

TEST_CASE("cross validation scores against a hand-rolled oracle") {
  Rng rng(83);
  Dataset d = smooth_sphere_dataset(rng, 40, 0.1);
  CvPlan plan;
  plan.folds = 4;
  plan.grid = isotropic_grid({0.2, 0.5}, 1);
  plan.seed = 11;
  FitConfig fc{plan.grid[0]};
  CvReport rep = cross_validate(d, fc, plan);

  // recompute fold (0, grid 0) from scratch
  auto folds = make_folds(40, 4, 11);
  std::vector<int> train_idx;
  for (int f = 1; f < 4; ++f)
    train_idx.insert(train_idx.end(), folds[f].begin(), folds[f].end());
  Dataset train = d.subset(train_idx);
  double sum = 0.0;
  for (int i : folds[0]) {
    FitConfig cfg{plan.grid[0]};
    Prediction p = extrinsic_kernel_predict(
        train, cfg, d.covariates().row(i).transpose());
    double dist = intrinsic_distance(d.manifold(), p.point, d.responses()[i]);
    sum += dist * dist;
  }
  CHECK(rep.fold_scores(0, 0) ==
        doctest::Approx(sum / folds[0].size()).epsilon(1e-12));

  // mean_scores is the fold average
  double mean0 = rep.fold_scores.col(0).mean();
  CHECK(rep.mean_scores[0] == doctest::Approx(mean0).epsilon(1e-12));
  CHECK(rep.chosen_index >= 0);
  CHECK(rep.chosen.h()[0] ==
        plan.grid[rep.chosen_index].h()[0]);

  // val_cap: only the leading entries of each fold are scored
  CvPlan capped = plan;
  capped.val_cap = 2;
  CvReport rep2 = cross_validate(d, fc, capped);
  double sum2 = 0.0;
  for (int t = 0; t < 2; ++t) {
    FitConfig cfg{plan.grid[0]};
    Prediction p = extrinsic_kernel_predict(
        train, cfg, d.covariates().row(folds[0][t]).transpose());
    double dist =
        intrinsic_distance(d.manifold(), p.point, d.responses()[folds[0][t]]);
    sum2 += dist * dist;
  }
  CHECK(rep2.fold_scores(0, 0) == doctest::Approx(sum2 / 2).epsilon(1e-12));

  // a cap at least as large as every fold changes nothing
  CvPlan loose = plan;
  loose.val_cap = 40;
  CvReport rep3 = cross_validate(d, fc, loose);
  CHECK(rep3.chosen_index == rep.chosen_index);
  CHECK((rep3.fold_scores.array() == rep.fold_scores.array()).all());
}

TEST_CASE("oversmoothing loses to a sensible bandwidth") {
  Rng rng(89);
  Dataset d = smooth_sphere_dataset(rng, 120, 0.05);
  CvPlan plan;
  plan.folds = 10;
  plan.grid = isotropic_grid({0.15, 50.0}, 1);
  plan.seed = 5;
  CvReport rep = cross_validate(d, FitConfig{plan.grid[0]}, plan);
  CHECK(rep.chosen_index == 0);
  CHECK(rep.mean_scores[0] < rep.mean_scores[1]);
}

TEST_CASE("failures poison single grid entries, not the whole report") {
  // A tiny bandwidth underflows every kernel weight at held-out points while
  // a moderate one works; the tiny entry must score +inf and lose.
  Rng rng(97);
  Dataset d = smooth_sphere_dataset(rng, 30, 0.05);
  CvPlan plan;
  plan.folds = 3;
  plan.grid = isotropic_grid({1e-8, 0.4}, 1);
  plan.seed = 2;
  CvReport rep = cross_validate(d, FitConfig{plan.grid[0]}, plan);
  CHECK(std::isinf(rep.mean_scores[0]));
  CHECK(std::isfinite(rep.mean_scores[1]));
  CHECK(rep.chosen_index == 1);

  // all entries failing is a hard error
  CvPlan bad;
  bad.folds = 3;
  bad.grid = isotropic_grid({1e-8, 1e-9}, 1);
  bad.seed = 2;
  CHECK_THROWS_AS(cross_validate(d, FitConfig{bad.grid[0]}, bad),
                  NumericalFailure);
}

TEST_CASE("score ties break toward the smaller bandwidth product") {
  // A constant-response dataset scores zero everywhere, so the tie-break
  // decides: smaller |H| wins regardless of grid position.
  Eigen::MatrixXd x(6, 1);
  x << 0, 0.2, 0.4, 0.6, 0.8, 1.0;
  Eigen::Vector3d c(0, 0, 1);
  std::vector<ManifoldPoint> ys(6, SpherePoint{c});
  Dataset d{x, ys, ManifoldSpec::sphere(2)};
  CvPlan plan;
  plan.folds = 3;
  plan.grid = isotropic_grid({2.0, 0.5, 0.5, 1.0}, 1);
  plan.seed = 1;
  CvReport rep = cross_validate(d, FitConfig{plan.grid[0]}, plan);
  for (double s : rep.mean_scores) CHECK(s == doctest::Approx(0.0));
  // both 0.5 entries tie on |H|; the earlier one wins
  CHECK(rep.chosen_index == 1);
}

TEST_CASE("custom predictor hook sees only training data") {
  Rng rng(101);
  Dataset d = smooth_sphere_dataset(rng, 24, 0.1);
  CvPlan plan;
  plan.folds = 4;
  plan.grid = isotropic_grid({0.5}, 1);
  plan.seed = 3;
  int calls = 0;
  CvReport rep = cross_validate_fn(
      d, plan,
      [&](const Dataset& train, const Bandwidth& bw, const Eigen::VectorXd& q) {
        CHECK(train.n() == 18);  // 24 minus a fold of 6
        ++calls;
        return extrinsic_kernel_predict(train, FitConfig{bw}, q).point;
      });
  CHECK(calls == 24);  // each point held out exactly once
  CHECK(rep.chosen_index == 0);
}

TEST_CASE("extrinsic metric squares the chordal distance") {
  Eigen::MatrixXd x(4, 1);
  x << 0, 1, 2, 3;
  std::vector<ManifoldPoint> ys(4, SpherePoint{Eigen::Vector3d(1, 0, 0)});
  Dataset d{x, ys, ManifoldSpec::sphere(2)};
  CvPlan plan;
  plan.folds = 2;
  plan.grid = isotropic_grid({1.0}, 1);
  plan.metric = CvMetric::ExtrinsicSquared;
  // constant data: every prediction is exact under either metric
  CvReport rep = cross_validate(d, FitConfig{plan.grid[0]}, plan);
  CHECK(rep.mean_scores[0] == doctest::Approx(0.0));
}

TEST_CASE("isotropic grid and distance summaries") {
  auto grid = isotropic_grid({0.1, 0.7}, 3);
  REQUIRE(grid.size() == 2);
  CHECK(grid[1].h()[2] == doctest::Approx(0.7));
  CHECK_THROWS_AS(isotropic_grid({}, 2), InvalidArgument);
  CHECK_THROWS_AS(isotropic_grid({0.0}, 2), InvalidArgument);

  ManifoldSpec spec = ManifoldSpec::sphere(2);
  std::vector<ManifoldPoint> a{SpherePoint{Eigen::Vector3d(1, 0, 0)},
                               SpherePoint{Eigen::Vector3d(0, 1, 0)}};
  std::vector<ManifoldPoint> b{SpherePoint{Eigen::Vector3d(0, 1, 0)},
                               SpherePoint{Eigen::Vector3d(0, 1, 0)}};
  // distances: pi/2 and 0 -> mean of squares is pi^2/8
  CHECK(mean_squared_distance(spec, a, b) ==
        doctest::Approx(M_PI * M_PI / 8).epsilon(1e-12));
  std::vector<ManifoldPoint> short_list{a[0]};
  CHECK_THROWS_AS(mean_squared_distance(spec, a, short_list),
                  DimensionMismatch);

  ResidualMetrics rm = mse_metrics(spec, a, b, a);
  CHECK(rm.mse == doctest::Approx(M_PI * M_PI / 8));
  CHECK(rm.pmse == doctest::Approx(0.0));
}

TEST_CASE("cross validation is reproducible and seed sensitive") {
  Rng rng(103);
  Dataset d = smooth_sphere_dataset(rng, 30, 0.1);
  CvPlan plan;
  plan.folds = 5;
  plan.grid = isotropic_grid({0.2, 0.4, 0.8}, 1);
  plan.seed = 77;
  CvReport r1 = cross_validate(d, FitConfig{plan.grid[0]}, plan);
  CvReport r2 = cross_validate(d, FitConfig{plan.grid[0]}, plan);
  CHECK(r1.fold_scores == r2.fold_scores);
  CHECK(r1.chosen_index == r2.chosen_index);
  plan.seed = 78;
  CvReport r3 = cross_validate(d, FitConfig{plan.grid[0]}, plan);
  CHECK(r1.fold_scores != r3.fold_scores);
}
