#include "mregress/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mregress {

std::vector<std::vector<int>> make_folds(int n, int folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  if (folds > n) throw InvalidArgument("more folds than observations");
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n - 1; ++i) {
    int j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(n - i));
    std::swap(order[i], order[j]);
  }
  std::vector<std::vector<int>> out(folds);
  int base = n / folds, extra = n % folds, pos = 0;
  for (int f = 0; f < folds; ++f) {
    int size = base + (f < extra ? 1 : 0);
    out[f].assign(order.begin() + pos, order.begin() + pos + size);
    pos += size;
  }
  return out;
}

namespace {

double score_pair(const ManifoldSpec& spec, CvMetric metric,
                  const ManifoldPoint& pred, const ManifoldPoint& truth) {
  if (metric == CvMetric::IntrinsicSquared) {
    double d = intrinsic_distance(spec, pred, truth);
    return d * d;
  }
  return (embed(spec, pred) - embed(spec, truth)).squaredNorm();
}

}  // namespace

CvReport cross_validate_fn(const Dataset& data, const CvPlan& plan,
                           const CvPredictor& predict) {
  if (plan.grid.empty()) throw InvalidArgument("bandwidth grid is empty");
  const int n = data.n();
  const int ng = static_cast<int>(plan.grid.size());
  auto folds = make_folds(n, plan.folds, plan.seed);
  const double inf = std::numeric_limits<double>::infinity();

  // Build the train/validation split datasets once; they are shared by every
  // grid entry.
  std::vector<Dataset> train_sets;
  train_sets.reserve(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<bool> held(n, false);
    for (int i : folds[f]) held[i] = true;
    std::vector<int> rest;
    rest.reserve(n - folds[f].size());
    for (int i = 0; i < n; ++i)
      if (!held[i]) rest.push_back(i);
    if (rest.empty()) throw InvalidArgument("a fold left no training data");
    train_sets.push_back(data.subset(rest));
  }

  CvReport report{std::vector<double>(ng, 0.0),
                  Eigen::MatrixXd::Zero(plan.folds, ng), -1, plan.grid[0]};
  for (int g = 0; g < ng; ++g) {
    bool failed = false;
    for (int f = 0; f < plan.folds && !failed; ++f) {
      const int take = plan.val_cap > 0
                           ? std::min<int>(plan.val_cap, folds[f].size())
                           : static_cast<int>(folds[f].size());
      double sum = 0.0;
      for (int t = 0; t < take; ++t) {
        int i = folds[f][t];
        try {
          ManifoldPoint pred =
              predict(train_sets[f], plan.grid[g], data.covariates().row(i).transpose());
          sum += score_pair(data.manifold(), plan.metric, pred, data.responses()[i]);
        } catch (const Error&) {
          failed = true;
          break;
        }
      }
      report.fold_scores(f, g) = sum / take;
    }
    if (failed) {
      report.fold_scores.col(g).setConstant(inf);
      report.mean_scores[g] = inf;
    } else {
      report.mean_scores[g] = report.fold_scores.col(g).mean();
    }
  }

  int best = -1;
  for (int g = 0; g < ng; ++g) {
    if (std::isinf(report.mean_scores[g])) continue;
    if (best < 0 || report.mean_scores[g] < report.mean_scores[best] ||
        (report.mean_scores[g] == report.mean_scores[best] &&
         plan.grid[g].det() < plan.grid[best].det()))
      best = g;
  }
  if (best < 0)
    throw NumericalFailure("every bandwidth in the grid scored +infinity");
  report.chosen_index = best;
  report.chosen = plan.grid[best];
  return report;
}

CvReport cross_validate(const Dataset& data, const FitConfig& config,
                        const CvPlan& plan) {
  FitConfig local = config;
  return cross_validate_fn(
      data, plan,
      [&local](const Dataset& train, const Bandwidth& bw,
               const Eigen::VectorXd& query) {
        FitConfig c = local;
        c.bandwidth = bw;
        return predict_one(train, c, query).point;
      });
}

std::vector<Bandwidth> isotropic_grid(const std::vector<double>& values, int m) {
  if (values.empty()) throw InvalidArgument("bandwidth grid cannot be empty");
  std::vector<Bandwidth> grid;
  grid.reserve(values.size());
  for (double v : values) grid.push_back(Bandwidth::isotropic(v, m));
  return grid;
}

double mean_squared_distance(const ManifoldSpec& spec,
                             const std::vector<ManifoldPoint>& predictions,
                             const std::vector<ManifoldPoint>& truths) {
  if (predictions.size() != truths.size())
    throw DimensionMismatch("prediction and truth lists differ in length");
  if (predictions.empty()) throw InvalidArgument("no pairs to score");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    double d = intrinsic_distance(spec, predictions[i], truths[i]);
    sum += d * d;
  }
  return sum / predictions.size();
}

ResidualMetrics mse_metrics(const ManifoldSpec& spec,
                            const std::vector<ManifoldPoint>& predictions,
                            const std::vector<ManifoldPoint>& signal,
                            const std::vector<ManifoldPoint>& realized) {
  return ResidualMetrics{mean_squared_distance(spec, predictions, signal),
                         mean_squared_distance(spec, predictions, realized)};
}

}  // namespace mregress
