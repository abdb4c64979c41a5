#include "mregress/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

namespace mregress {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_report(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << kFileVersion << "\n";
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + format_double(v[i]);
  return s;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

double median_of(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(),
                         [](double x) { return !std::isfinite(x); }),
          v.end());
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Deterministic slot-per-cell parallel loop; each cell writes only its own
// result slots, so the output is identical for any worker count.
void run_cells(int count, int workers, const std::function<void(int)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  int nw = std::min(workers, count);
  for (int w = 0; w < nw; ++w)
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  for (auto& t : pool) t.join();
}

template <class F>
double timed_secs(F&& f, int trials) {
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                 .count();
  }
  return total / std::max(1, trials);
}

}  // namespace

std::vector<double> SphereCompareConfig::default_cv_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 20; ++i) g.push_back(0.1 * i);
  return g;
}

void ols_slope(const std::vector<double>& x, const std::vector<double>& y,
               double& slope, double& stderr_out) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != x.size())
    throw InvalidArgument("slope needs at least two matched points");
  double xbar = 0.0, ybar = 0.0;
  for (int i = 0; i < n; ++i) {
    xbar += x[i];
    ybar += y[i];
  }
  xbar /= n;
  ybar /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("slope undefined: no spread in x");
  slope = sxy / sxx;
  double intercept = ybar - slope * xbar;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = y[i] - intercept - slope * x[i];
    rss += r * r;
  }
  stderr_out = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
}

SphereCompareResult run_sphere_compare(const SphereCompareConfig& cfg) {
  if (cfg.holdout < 1 || cfg.n_total <= cfg.holdout)
    throw InvalidArgument("need n_total > holdout >= 1");
  if (cfg.kappas.empty() || cfg.train_sizes.empty() || cfg.cv_grid.empty())
    throw InvalidArgument("sphere-compare sweep is empty");
  const int pool = cfg.n_total - cfg.holdout;
  for (int n : cfg.train_sizes)
    if (n < 2 || n > pool)
      throw InvalidArgument("train sizes must lie in [2, n_total - holdout]");

  const int nk = static_cast<int>(cfg.kappas.size());
  const int nt = static_cast<int>(cfg.train_sizes.size());

  // One dataset per kappa, shared by every training size.
  std::vector<SphereSimData> sims;
  sims.reserve(nk);
  for (int ki = 0; ki < nk; ++ki)
    sims.push_back(simulate_sphere_regression(
        SphereSimConfig{cfg.n_total, cfg.kappas[ki], mix_seed(cfg.seed, ki)}));

  std::vector<std::vector<Eigen::VectorXd>> queries(nk);
  std::vector<std::vector<ManifoldPoint>> hold_means(nk), hold_real(nk);
  for (int ki = 0; ki < nk; ++ki) {
    for (int j = 0; j < cfg.holdout; ++j) {
      int i = pool + j;
      queries[ki].push_back(sims[ki].data.covariates().row(i).transpose());
      hold_means[ki].push_back(sims[ki].means[i]);
      hold_real[ki].push_back(sims[ki].data.responses()[i]);
    }
  }

  const int cells = nk * nt;
  std::vector<BenchRecord> slots(2 * cells);
  std::vector<std::string> fails(2 * cells);
  std::vector<char> ok(2 * cells, 0);
  const ManifoldSpec spec = ManifoldSpec::sphere(2);

  auto cell = [&](int c) {
    const int ki = c / nt, ni = c % nt;
    const int n_train = cfg.train_sizes[ni];
    std::vector<int> idx(n_train);
    for (int i = 0; i < n_train; ++i) idx[i] = i;
    Dataset train = sims[ki].data.subset(idx);
    const auto& qs = queries[ki];
    const int folds = std::min(cfg.cv_folds, n_train);
    const std::uint64_t cv_seed = mix_seed(cfg.seed, 100000 + c);
    auto cell_tag = [&](const char* method) {
      return "kappa=" + format_double(cfg.kappas[ki]) +
             ",n_train=" + std::to_string(n_train) + ",method=" + method;
    };

    // extrinsic
    try {
      if (folds < 2)
        throw InvalidArgument("too few observations to cross-validate");
      CvPlan plan{folds, isotropic_grid(cfg.cv_grid, 3),
                  CvMetric::IntrinsicSquared, cv_seed};
      FitConfig fc{plan.grid[0]};
      fc.bandwidth = cross_validate(train, fc, plan).chosen;
      std::vector<ManifoldPoint> preds;
      preds.reserve(qs.size());
      for (const auto& q : qs)
        preds.push_back(extrinsic_kernel_predict(train, fc, q).point);
      ResidualMetrics met =
          mse_metrics(spec, preds, hold_means[ki], hold_real[ki]);
      double secs = timed_secs(
                        [&] {
                          for (const auto& q : qs)
                            extrinsic_kernel_predict(train, fc, q);
                        },
                        cfg.timing_trials) /
                    qs.size();
      slots[2 * c] = BenchRecord{cfg.kappas[ki], n_train, "extrinsic",
                                 met.mse,        met.pmse, secs};
      ok[2 * c] = 1;
    } catch (const Error& e) {
      fails[2 * c] = cell_tag("extrinsic") + ": " + e.what();
    }

    // intrinsic
    try {
      if (folds < 2)
        throw InvalidArgument("too few observations to cross-validate");
      IntrinsicConfig cv_ic = cfg.intrinsic;
      cv_ic.max_iters = cfg.cv_intrinsic_max_iters;
      cv_ic.strict = false;
      CvPlan plan{folds, isotropic_grid(cfg.cv_grid, 3),
                  CvMetric::IntrinsicSquared, cv_seed};
      plan.val_cap = cfg.cv_intrinsic_val_cap;
      CvReport rep = cross_validate_fn(
          train, plan,
          [&](const Dataset& tr, const Bandwidth& bw, const Eigen::VectorXd& q) {
            return intrinsic_sphere_predict(tr, KernelSpec::gaussian(), bw,
                                            cv_ic, q)
                .point;
          });
      const Bandwidth& bw = rep.chosen;
      std::vector<ManifoldPoint> preds;
      preds.reserve(qs.size());
      for (const auto& q : qs)
        preds.push_back(intrinsic_sphere_predict(train, KernelSpec::gaussian(),
                                                 bw, cfg.intrinsic, q)
                            .point);
      ResidualMetrics met =
          mse_metrics(spec, preds, hold_means[ki], hold_real[ki]);
      double secs = timed_secs(
                        [&] {
                          for (const auto& q : qs)
                            intrinsic_sphere_predict(
                                train, KernelSpec::gaussian(), bw,
                                cfg.intrinsic, q);
                        },
                        cfg.timing_trials) /
                    qs.size();
      slots[2 * c + 1] = BenchRecord{cfg.kappas[ki], n_train, "intrinsic",
                                     met.mse,        met.pmse, secs};
      ok[2 * c + 1] = 1;
    } catch (const Error& e) {
      fails[2 * c + 1] = cell_tag("intrinsic") + ": " + e.what();
    }
  };
  run_cells(cells, cfg.workers, cell);

  SphereCompareResult result;
  for (int s = 0; s < 2 * cells; ++s) {
    if (ok[s])
      result.records.push_back(slots[s]);
    else if (!fails[s].empty())
      result.failures.push_back(fails[s]);
  }

  if (!cfg.out_dir.empty()) {
    std::ofstream csv = open_report(cfg.out_dir, "sphere_compare.csv");
    csv << "kappa,n_train,method,mse,pmse,secs\n";
    for (const auto& r : result.records)
      csv << format_double(r.kappa) << "," << r.n_train << "," << r.method
          << "," << format_double(r.mse) << "," << format_double(r.pmse) << ","
          << format_double(r.secs) << "\n";
    std::ofstream log = open_report(cfg.out_dir, "failures.log");
    for (const auto& f : result.failures) log << f << "\n";
    std::ofstream echo = open_report(cfg.out_dir, "config.txt");
    echo << "experiment = sphere-compare\n"
         << "kappas = " << join_doubles(cfg.kappas) << "\n"
         << "n_total = " << cfg.n_total << "\n"
         << "holdout = " << cfg.holdout << "\n"
         << "train_sizes = " << join_ints(cfg.train_sizes) << "\n"
         << "cv_grid = " << join_doubles(cfg.cv_grid) << "\n"
         << "cv_folds = " << cfg.cv_folds << "\n"
         << "intrinsic_step = " << format_double(cfg.intrinsic.step_size) << "\n"
         << "intrinsic_tolerance = " << format_double(cfg.intrinsic.tolerance)
         << "\n"
         << "intrinsic_max_iters = " << cfg.intrinsic.max_iters << "\n"
         << "cv_intrinsic_max_iters = " << cfg.cv_intrinsic_max_iters << "\n"
         << "cv_intrinsic_val_cap = " << cfg.cv_intrinsic_val_cap << "\n"
         << "timing_trials = " << cfg.timing_trials << "\n"
         << "seed = " << cfg.seed << "\n"
         << "workers = " << cfg.workers << "\n";
  }
  return result;
}

SphereRateResult run_sphere_rate(const SphereRateConfig& cfg) {
  if (cfg.n_grid.empty() || cfg.replicates < 1 || cfg.n_queries < 1)
    throw InvalidArgument("sphere-rate sweep is empty");
  if (!(cfg.h_scale > 0.0)) throw InvalidArgument("h_scale must be positive");
  for (int n : cfg.n_grid)
    if (n < 2) throw InvalidArgument("grid sizes must be >= 2");

  const int ns = static_cast<int>(cfg.n_grid.size());
  SphereRateResult result;
  result.replicate_mse = Eigen::MatrixXd::Constant(cfg.replicates, ns, kNaN);
  const ManifoldSpec spec = ManifoldSpec::sphere(2);

  auto cell = [&](int c) {
    const int si = c / cfg.replicates, r = c % cfg.replicates;
    const int n = cfg.n_grid[si];
    SphereSimData sim = simulate_sphere_regression(SphereSimConfig{
        n + cfg.n_queries, cfg.kappa, mix_seed(mix_seed(cfg.seed, si), r)});
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    Dataset train = sim.data.subset(idx);
    FitConfig fc{Bandwidth::isotropic(cfg.h_scale * std::pow(n, -1.0 / 7.0), 3)};
    double sum = 0.0;
    int count = 0;
    for (int j = 0; j < cfg.n_queries; ++j) {
      int i = n + j;
      try {
        Prediction p = extrinsic_kernel_predict(
            train, fc, sim.data.covariates().row(i).transpose());
        double d = intrinsic_distance(spec, p.point, sim.means[i]);
        sum += d * d;
        ++count;
      } catch (const Error&) {
        // skip: far-tail query with no mass in the window
      }
    }
    if (count > 0) result.replicate_mse(r, si) = sum / count;
  };
  run_cells(ns * cfg.replicates, cfg.workers, cell);

  result.mean_mse.assign(ns, kNaN);
  std::vector<double> lx, ly;
  for (int si = 0; si < ns; ++si) {
    double sum = 0.0;
    int count = 0;
    for (int r = 0; r < cfg.replicates; ++r) {
      double v = result.replicate_mse(r, si);
      if (std::isfinite(v)) {
        sum += v;
        ++count;
      }
    }
    if (count == 0)
      throw NumericalFailure("all replicates failed at n = " +
                             std::to_string(cfg.n_grid[si]));
    result.mean_mse[si] = sum / count;
    lx.push_back(std::log(double(cfg.n_grid[si])));
    ly.push_back(std::log(result.mean_mse[si]));
  }
  ols_slope(lx, ly, result.slope, result.slope_stderr);

  if (!cfg.out_dir.empty()) {
    std::ofstream csv = open_report(cfg.out_dir, "sphere_rate.csv");
    csv << "n,replicate,mse\n";
    for (int si = 0; si < ns; ++si)
      for (int r = 0; r < cfg.replicates; ++r)
        csv << cfg.n_grid[si] << "," << r << ","
            << format_double(result.replicate_mse(r, si)) << "\n";
    std::ofstream sum = open_report(cfg.out_dir, "sphere_rate_summary.csv");
    sum << "n,mean_mse\n";
    for (int si = 0; si < ns; ++si)
      sum << cfg.n_grid[si] << "," << format_double(result.mean_mse[si]) << "\n";
    std::ofstream echo = open_report(cfg.out_dir, "config.txt");
    echo << "experiment = sphere-rate\n"
         << "n_grid = " << join_ints(cfg.n_grid) << "\n"
         << "replicates = " << cfg.replicates << "\n"
         << "kappa = " << format_double(cfg.kappa) << "\n"
         << "n_queries = " << cfg.n_queries << "\n"
         << "h_scale = " << format_double(cfg.h_scale) << "\n"
         << "seed = " << cfg.seed << "\n"
         << "workers = " << cfg.workers << "\n"
         << "slope = " << format_double(result.slope) << "\n"
         << "slope_stderr = " << format_double(result.slope_stderr) << "\n";
  }
  return result;
}

namespace {

// Shared by the synthetic Grassmann study and the finance pipeline:
// cross-validate a bandwidth for the kernel estimator, then leave-one-out
// predict every row, recording subspace dimensions and residual distances.
struct LooOutcome {
  double chosen_bandwidth = 0.0;
  std::vector<int> khat;
  std::vector<double> residuals;
  std::vector<double> consecutive;
  std::vector<std::string> failures;
};

LooOutcome grassmann_loo(const Dataset& data, const std::vector<double>& cv_grid,
                         int cv_folds, std::uint64_t cv_seed) {
  CvPlan plan{std::min(cv_folds, data.n()),
              isotropic_grid(cv_grid, data.covariate_dim()),
              CvMetric::IntrinsicSquared, cv_seed};
  if (plan.folds < 2) throw InvalidArgument("too few rows to cross-validate");
  FitConfig fc{plan.grid[0]};
  fc.bandwidth = cross_validate(data, fc, plan).chosen;

  LooOutcome out;
  out.chosen_bandwidth = fc.bandwidth.h()[0];
  const int n = data.n();
  out.khat.assign(n, -1);
  out.residuals.assign(n, kNaN);
  out.consecutive.assign(n, kNaN);
  for (int t = 1; t < n; ++t)
    out.consecutive[t] =
        intrinsic_distance(data.manifold(), data.responses()[t - 1],
                           data.responses()[t]);
  for (int t = 0; t < n; ++t) {
    std::vector<int> rest;
    rest.reserve(n - 1);
    for (int i = 0; i < n; ++i)
      if (i != t) rest.push_back(i);
    try {
      Prediction p = extrinsic_kernel_predict(
          data.subset(rest), fc, data.covariates().row(t).transpose());
      out.khat[t] = std::get<GrassmannPoint>(p.point).subspace_dim();
      out.residuals[t] =
          intrinsic_distance(data.manifold(), p.point, data.responses()[t]);
    } catch (const Error& e) {
      out.failures.push_back("index " + std::to_string(t) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

GrassmannSyntheticResult run_grassmann_synthetic(
    const GrassmannSyntheticConfig& cfg) {
  GrassmannSimData sim = simulate_grassmann_process(cfg.sim);
  LooOutcome loo = grassmann_loo(sim.data, cfg.cv_grid, cfg.cv_folds, cfg.cv_seed);

  GrassmannSyntheticResult result;
  result.chosen_bandwidth = loo.chosen_bandwidth;
  result.true_dims = sim.dims;
  result.khat = std::move(loo.khat);
  result.residuals = std::move(loo.residuals);
  result.consecutive = std::move(loo.consecutive);
  result.failures = std::move(loo.failures);
  int hits = 0;
  for (std::size_t i = 0; i < result.khat.size(); ++i)
    if (result.khat[i] == result.true_dims[i]) ++hits;
  result.dim_accuracy = double(hits) / result.khat.size();
  result.median_residual = median_of(result.residuals);
  std::vector<double> cons(result.consecutive.begin() + 1,
                           result.consecutive.end());
  result.median_consecutive = median_of(cons);

  if (!cfg.out_dir.empty()) {
    std::ofstream csv = open_report(cfg.out_dir, "grassmann_synthetic.csv");
    csv << "t,true_dim,khat,residual,consecutive_distance\n";
    const int n = static_cast<int>(result.khat.size());
    for (int t = 0; t < n; ++t) {
      csv << t + 1 << "," << result.true_dims[t] << "," << result.khat[t] << ",";
      if (std::isfinite(result.residuals[t]))
        csv << format_double(result.residuals[t]);
      csv << ",";
      if (std::isfinite(result.consecutive[t]))
        csv << format_double(result.consecutive[t]);
      csv << "\n";
    }
    std::ofstream log = open_report(cfg.out_dir, "failures.log");
    for (const auto& f : result.failures) log << f << "\n";
    std::ofstream echo = open_report(cfg.out_dir, "config.txt");
    echo << "experiment = grassmann-synthetic\n"
         << "n1 = " << cfg.sim.n1 << "\n"
         << "n2 = " << cfg.sim.n2 << "\n"
         << "kappa = " << format_double(cfg.sim.kappa) << "\n"
         << "m = " << cfg.sim.m << "\n"
         << "gibbs_sweeps = " << cfg.sim.gibbs_sweeps << "\n"
         << "seed = " << cfg.sim.seed << "\n"
         << "cv_grid = " << join_doubles(cfg.cv_grid) << "\n"
         << "cv_folds = " << cfg.cv_folds << "\n"
         << "cv_seed = " << cfg.cv_seed << "\n"
         << "chosen_bandwidth = " << format_double(result.chosen_bandwidth)
         << "\n";
  }
  return result;
}

FinanceResult run_finance_pipeline(const FinanceConfig& cfg) {
  PriceTable table = ingest_prices(cfg.prices_path);
  WeeklyBases weekly =
      weekly_eigenbases(table, cfg.threshold, cfg.days_per_week);
  LooOutcome loo =
      grassmann_loo(weekly.data, cfg.cv_grid, cfg.cv_folds, cfg.cv_seed);

  FinanceResult result;
  result.weeks = weekly.data.n();
  result.dropped_weeks = weekly.dropped_weeks;
  result.chosen_bandwidth = loo.chosen_bandwidth;
  result.week_numbers = weekly.week_numbers;
  result.dims = weekly.dims;
  result.khat = std::move(loo.khat);
  result.residuals = std::move(loo.residuals);
  result.consecutive = std::move(loo.consecutive);
  result.failures = std::move(loo.failures);
  result.median_residual = median_of(result.residuals);
  std::vector<double> cons(result.consecutive.begin() + 1,
                           result.consecutive.end());
  result.median_consecutive = median_of(cons);

  if (!cfg.out_dir.empty()) {
    std::ofstream csv = open_report(cfg.out_dir, "finance.csv");
    csv << "week,khat,residual,consecutive_distance\n";
    for (int t = 0; t < result.weeks; ++t) {
      csv << t + 1 << "," << result.khat[t] << ",";
      if (std::isfinite(result.residuals[t]))
        csv << format_double(result.residuals[t]);
      csv << ",";
      if (std::isfinite(result.consecutive[t]))
        csv << format_double(result.consecutive[t]);
      csv << "\n";
    }
    std::ofstream log = open_report(cfg.out_dir, "failures.log");
    for (const auto& f : result.failures) log << f << "\n";
    std::ofstream echo = open_report(cfg.out_dir, "config.txt");
    echo << "experiment = finance\n"
         << "prices = " << cfg.prices_path << "\n"
         << "threshold = " << format_double(cfg.threshold) << "\n"
         << "days_per_week = " << cfg.days_per_week << "\n"
         << "cv_grid = " << join_doubles(cfg.cv_grid) << "\n"
         << "cv_folds = " << cfg.cv_folds << "\n"
         << "cv_seed = " << cfg.cv_seed << "\n"
         << "weeks = " << result.weeks << "\n"
         << "dropped_weeks = " << result.dropped_weeks << "\n"
         << "chosen_bandwidth = " << format_double(result.chosen_bandwidth)
         << "\n";
  }
  return result;
}

ShapeRegressionResult run_shape_regression(const ShapeRegressionConfig& cfg) {
  LandmarkIngest ingest = ingest_landmarks(cfg.landmarks_path);
  if (ingest.records.empty())
    throw DataError(cfg.landmarks_path + ": no usable rows");
  Dataset data = landmarks_to_dataset(ingest.records);

  CvPlan plan{std::min(cfg.cv_folds, data.n()), isotropic_grid(cfg.cv_grid, 2),
              CvMetric::IntrinsicSquared, cfg.cv_seed};
  if (plan.folds < 2) throw InvalidArgument("too few rows to cross-validate");
  FitConfig fc{plan.grid[0]};
  fc.kernel = KernelSpec::mixed(0);  // group flag is covariate 0
  fc.bandwidth = cross_validate(data, fc, plan).chosen;

  ShapeRegressionResult result;
  result.chosen_bandwidth = fc.bandwidth.h()[1];
  result.rows_used = data.n();
  result.issues = ingest.issues;
  for (int diag = 0; diag <= 1; ++diag) {
    for (double age : cfg.ages) {
      Eigen::Vector2d q(double(diag), age);
      try {
        Prediction p = predict_one(data, fc, q);
        result.predictions.push_back(
            ShapePrediction{diag, age, std::get<PlanarShape>(p.point)});
      } catch (const Error& e) {
        result.failures.push_back("diag=" + std::to_string(diag) +
                                  ",age=" + format_double(age) + ": " + e.what());
      }
    }
  }

  if (!cfg.out_dir.empty()) {
    std::ofstream csv = open_report(cfg.out_dir, "shapes.csv");
    csv << "diag,age,landmark,x,y\n";
    for (const auto& p : result.predictions) {
      const Eigen::VectorXcd& u = p.shape.preshape();
      for (int j = 0; j < u.size(); ++j)
        csv << p.diag << "," << format_double(p.age) << "," << j + 1 << ","
            << format_double(u[j].real()) << "," << format_double(u[j].imag())
            << "\n";
    }
    if (cfg.dump_weights) {
      std::ofstream wcsv = open_report(cfg.out_dir, "weights.csv");
      wcsv << "diag,age,row,weight\n";
      for (int diag = 0; diag <= 1; ++diag)
        for (double age : cfg.ages) {
          Eigen::Vector2d q(double(diag), age);
          Eigen::VectorXd w =
              kernel_weights(fc.kernel, fc.bandwidth, q, data.covariates());
          for (int i = 0; i < w.size(); ++i)
            wcsv << diag << "," << format_double(age) << "," << i << ","
                 << format_double(w[i]) << "\n";
        }
    }
    std::ofstream log = open_report(cfg.out_dir, "failures.log");
    for (const auto& f : result.failures) log << f << "\n";
    for (const auto& issue : result.issues)
      log << "ingest line " << issue.line << ": " << issue.message << "\n";
    std::ofstream echo = open_report(cfg.out_dir, "config.txt");
    echo << "experiment = shape\n"
         << "landmarks = " << cfg.landmarks_path << "\n"
         << "ages = " << join_doubles(cfg.ages) << "\n"
         << "cv_grid = " << join_doubles(cfg.cv_grid) << "\n"
         << "cv_folds = " << cfg.cv_folds << "\n"
         << "cv_seed = " << cfg.cv_seed << "\n"
         << "rows_used = " << result.rows_used << "\n"
         << "chosen_bandwidth = " << format_double(result.chosen_bandwidth)
         << "\n";
  }
  return result;
}

}  // namespace mregress
