#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mregress/regression.hpp"

namespace mregress {

enum class CvMetric {
  IntrinsicSquared,   // squared manifold distance
  ExtrinsicSquared,   // squared ambient distance between embeddings
};

struct CvPlan {
  int folds = 10;
  std::vector<Bandwidth> grid;
  CvMetric metric = CvMetric::IntrinsicSquared;
  std::uint64_t seed = 0;
  // Score at most this many validation points per fold (0 = all of them).
  // The points taken are the leading entries of the shuffled fold, so the
  // subsample is deterministic, shared across the grid, and unbiased.  Meant
  // for expensive predictors (iterative fits) where full validation is
  // prohibitive.
  int val_cap = 0;
};

struct CvReport {
  // Mean validation score per grid entry (+inf where any prediction failed).
  std::vector<double> mean_scores;
  // Per-fold scores, folds x grid.
  Eigen::MatrixXd fold_scores;
  int chosen_index = -1;
  // Chosen bandwidth: minimal mean score, ties broken toward the smaller
  // |H| = prod h_j, then toward the earlier grid entry.
  Bandwidth chosen;
};

// Deterministic fold assignment: Fisher-Yates shuffle of 0..n-1 driven by
// mt19937_64(seed) with j = i + rng() % (n - i), then contiguous blocks of the
// shuffled order (the first n % folds blocks get one extra element).
std::vector<std::vector<int>> make_folds(int n, int folds, std::uint64_t seed);

// K-fold cross-validation over the bandwidth grid with an arbitrary predictor.
// Any prediction failure (empty neighborhood, rank deficiency, ...) scores the
// offending bandwidth +inf.  Throws NumericalFailure when every bandwidth
// scores +inf.
using CvPredictor = std::function<ManifoldPoint(
    const Dataset& train, const Bandwidth& bw, const Eigen::VectorXd& query)>;

CvReport cross_validate_fn(const Dataset& data, const CvPlan& plan,
                           const CvPredictor& predict);

// Standard entry point: cross-validate the estimator described by the config
// (its bandwidth field is replaced by each grid entry in turn).
CvReport cross_validate(const Dataset& data, const FitConfig& config,
                        const CvPlan& plan);

// Isotropic grid over m covariates from scalar bandwidth values.
std::vector<Bandwidth> isotropic_grid(const std::vector<double>& values, int m);

// Mean squared manifold distance between matched prediction/truth lists.
double mean_squared_distance(const ManifoldSpec& spec,
                             const std::vector<ManifoldPoint>& predictions,
                             const std::vector<ManifoldPoint>& truths);

struct ResidualMetrics {
  double mse;   // against the noiseless signal
  double pmse;  // against the realized observations
};

ResidualMetrics mse_metrics(const ManifoldSpec& spec,
                            const std::vector<ManifoldPoint>& predictions,
                            const std::vector<ManifoldPoint>& signal,
                            const std::vector<ManifoldPoint>& realized);

}  // namespace mregress
