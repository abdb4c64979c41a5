// Command-line front end: simulate datasets, fit/predict/cross-validate on
// CSV data, benchmark estimators, and run the canned experiments.
#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "mregress/experiments.hpp"

namespace {

using namespace mregress;

struct CommonFit {
  std::string data_path;
  std::string manifold = "sphere";  // sphere | shape | grassmann
  std::string kernel = "gaussian";  // gaussian | mixed
  std::string method = "extrinsic"; // extrinsic | intrinsic | median
  std::string metric = "intrinsic"; // cv scoring: intrinsic | extrinsic
  int binary_index = 0;
  std::vector<double> bandwidth;  // scalar (isotropic) or one entry per covariate
  std::vector<double> cv_grid;    // isotropic grid; overrides --bandwidth
  int degree = 0;
  int folds = 10;
  std::uint64_t seed = 0;
  IntrinsicConfig intrinsic;
};

Dataset load_dataset(const CommonFit& o) {
  if (o.manifold == "sphere") return read_sphere_dataset(o.data_path).data;
  if (o.manifold == "shape") {
    LandmarkIngest ingest = ingest_landmarks(o.data_path);
    for (const auto& issue : ingest.issues)
      std::cerr << "warning: skipped line " << issue.line << ": "
                << issue.message << "\n";
    if (ingest.records.empty())
      throw DataError(o.data_path + ": no usable rows");
    return landmarks_to_dataset(ingest.records);
  }
  if (o.manifold == "grassmann") return read_grassmann_dataset(o.data_path);
  throw InvalidArgument("unknown manifold '" + o.manifold +
                        "' (expected sphere, shape or grassmann)");
}

KernelSpec make_kernel(const CommonFit& o) {
  if (o.kernel == "gaussian") return KernelSpec::gaussian();
  if (o.kernel == "mixed") return KernelSpec::mixed(o.binary_index);
  throw InvalidArgument("unknown kernel '" + o.kernel +
                        "' (expected gaussian or mixed)");
}

Bandwidth make_bandwidth(const std::vector<double>& values, int m) {
  if (values.size() == 1) return Bandwidth::isotropic(values[0], m);
  if (static_cast<int>(values.size()) == m)
    return Bandwidth(Eigen::Map<const Eigen::VectorXd>(values.data(), m));
  throw InvalidArgument("--bandwidth needs 1 or covariate-dim entries");
}

CvMetric make_metric(const std::string& name) {
  if (name == "intrinsic") return CvMetric::IntrinsicSquared;
  if (name == "extrinsic") return CvMetric::ExtrinsicSquared;
  throw InvalidArgument("unknown cv metric '" + name + "'");
}

FitConfig make_fit_config(const CommonFit& o, const Bandwidth& bw) {
  FitConfig fc{bw};
  fc.kernel = make_kernel(o);
  fc.degree = o.degree;
  if (o.method == "median")
    fc.estimator = EstimatorKind::Median;
  else if (o.method != "extrinsic" && o.method != "intrinsic")
    throw InvalidArgument("unknown method '" + o.method +
                          "' (expected extrinsic, intrinsic or median)");
  return fc;
}

// Cross-validates when a grid is given, otherwise uses --bandwidth.
Bandwidth resolve_bandwidth(const CommonFit& o, const Dataset& data) {
  const int m = data.covariate_dim();
  if (o.cv_grid.empty()) {
    if (o.bandwidth.empty())
      throw InvalidArgument("pass --bandwidth or --cv-grid");
    return make_bandwidth(o.bandwidth, m);
  }
  CvPlan plan{std::min(o.folds, data.n()), isotropic_grid(o.cv_grid, m),
              make_metric(o.metric), o.seed};
  CvReport rep = [&]() -> CvReport {
    if (o.method == "intrinsic") {
      KernelSpec kernel = make_kernel(o);
      IntrinsicConfig ic = o.intrinsic;
      return cross_validate_fn(
          data, plan,
          [&](const Dataset& train, const Bandwidth& bw,
              const Eigen::VectorXd& q) {
            return intrinsic_sphere_predict(train, kernel, bw, ic, q).point;
          });
    }
    return cross_validate(data, make_fit_config(o, plan.grid[0]), plan);
  }();
  std::cout << "cv_chosen_bandwidth = " << format_double(rep.chosen.h()[0])
            << "\n";
  return rep.chosen;
}

std::vector<BatchEntry> run_batch(const Dataset& data, const CommonFit& o,
                                  const Bandwidth& bw,
                                  const Eigen::MatrixXd& queries) {
  std::vector<Eigen::VectorXd> qs;
  qs.reserve(queries.rows());
  for (Eigen::Index i = 0; i < queries.rows(); ++i)
    qs.push_back(queries.row(i).transpose());
  if (o.method != "intrinsic") {
    return predict_batch(data, make_fit_config(o, bw), qs);
  }
  KernelSpec kernel = make_kernel(o);
  std::vector<BatchEntry> out;
  out.reserve(qs.size());
  for (const auto& q : qs) {
    try {
      out.push_back(BatchEntry{
          intrinsic_sphere_predict(data, kernel, bw, o.intrinsic, q), {}});
    } catch (const Error& e) {
      out.push_back(BatchEntry{std::nullopt, e.what()});
    }
  }
  return out;
}

std::ofstream open_versioned(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << kFileVersion << "\n";
  return out;
}

void write_predictions(const std::string& path, const Dataset& data,
                       const Eigen::MatrixXd& queries,
                       const std::vector<BatchEntry>& batch) {
  const ManifoldSpec& spec = data.manifold();
  std::ofstream out = open_versioned(path);
  for (Eigen::Index j = 0; j < queries.cols(); ++j)
    out << (j ? "," : "") << "x" << j + 1;
  int value_cols = 0;
  if (spec.kind() == ManifoldKind::Sphere) {
    value_cols = spec.sphere_dim() + 1;
    for (int j = 0; j < value_cols; ++j) out << ",y" << j + 1;
  } else if (spec.kind() == ManifoldKind::PlanarShape) {
    value_cols = 2 * spec.landmark_count();
    for (int j = 0; j < spec.landmark_count(); ++j)
      out << ",u" << j + 1 << "x,u" << j + 1 << "y";
  } else if (spec.kind() == ManifoldKind::Grassmann) {
    const int m = spec.space_dim();
    value_cols = m * m + 1;
    out << ",khat";
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) out << ",g" << r + 1 << "_" << c + 1;
  } else {
    throw InvalidArgument("predictions writer does not support " +
                          spec.describe());
  }
  out << ",error\n";

  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (Eigen::Index j = 0; j < queries.cols(); ++j)
      out << (j ? "," : "") << format_double(queries(i, j));
    if (!batch[i].prediction) {
      for (int j = 0; j < value_cols; ++j) out << ",";
      out << "," << batch[i].error << "\n";
      continue;
    }
    const Prediction& p = *batch[i].prediction;
    if (spec.kind() == ManifoldKind::Sphere) {
      const auto& y = std::get<SpherePoint>(p.point).coords();
      for (Eigen::Index j = 0; j < y.size(); ++j)
        out << "," << format_double(y[j]);
    } else if (spec.kind() == ManifoldKind::PlanarShape) {
      const auto& u = std::get<PlanarShape>(p.point).preshape();
      for (Eigen::Index j = 0; j < u.size(); ++j)
        out << "," << format_double(u[j].real()) << ","
            << format_double(u[j].imag());
    } else {
      const auto& g = std::get<GrassmannPoint>(p.point);
      out << "," << g.subspace_dim();
      AmbientVector e = embed(spec, p.point);
      for (Eigen::Index j = 0; j < e.size(); ++j)
        out << "," << format_double(e[j]);
    }
    out << ",\n";
  }
}

void add_common_options(CLI::App* sub, CommonFit& o) {
  sub->add_option("--data", o.data_path, "input dataset CSV")->required();
  sub->add_option("--manifold", o.manifold, "sphere | shape | grassmann");
  sub->add_option("--kernel", o.kernel, "gaussian | mixed");
  sub->add_option("--binary-index", o.binary_index,
                  "exact-match coordinate of the mixed kernel");
  sub->add_option("--bandwidth", o.bandwidth,
                  "bandwidth(s): one value or one per covariate")
      ->delimiter(',');
  sub->add_option("--cv-grid", o.cv_grid,
                  "isotropic bandwidth grid; triggers cross-validation")
      ->delimiter(',');
  sub->add_option("--degree", o.degree, "local polynomial degree");
  sub->add_option("--method", o.method, "extrinsic | intrinsic | median");
  sub->add_option("--metric", o.metric, "cv metric: intrinsic | extrinsic");
  sub->add_option("--folds", o.folds, "cross-validation folds");
  sub->add_option("--seed", o.seed, "cross-validation fold seed");
  sub->add_option("--intrinsic-step", o.intrinsic.step_size,
                  "intrinsic descent step size");
  sub->add_option("--intrinsic-tol", o.intrinsic.tolerance,
                  "intrinsic descent stopping tolerance");
  sub->add_option("--intrinsic-max-iters", o.intrinsic.max_iters,
                  "intrinsic descent iteration cap");
  sub->set_config("--config");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extrinsic regression for manifold-valued responses"};
  app.require_subcommand(1);

  // ---- simulate -------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "generate synthetic datasets");
  sim->require_subcommand(1);

  SphereSimConfig sph_cfg;
  std::string sim_out;
  auto* sim_sphere = sim->add_subcommand("sphere", "vMF regression on S^2");
  sim_sphere->add_option("--n", sph_cfg.n, "observations")->required();
  sim_sphere->add_option("--kappa", sph_cfg.kappa, "vMF concentration");
  sim_sphere->add_option("--seed", sph_cfg.seed, "RNG seed");
  sim_sphere->add_option("--out", sim_out, "output CSV")->required();
  sim_sphere->set_config("--config");
  sim_sphere->callback([&] {
    SphereSimData data = simulate_sphere_regression(sph_cfg);
    write_sphere_dataset(sim_out, data.data, &data.means);
    std::cout << "wrote " << sim_out << " (n = " << data.data.n() << ")\n";
  });

  GrassmannSimConfig gr_cfg;
  std::string gr_out;
  auto* sim_gr = sim->add_subcommand(
      "grassmann", "subspace process with a dimension jump");
  sim_gr->add_option("--n1", gr_cfg.n1, "length of the dimension-4 segment");
  sim_gr->add_option("--n2", gr_cfg.n2, "length of the dimension-5 segment");
  sim_gr->add_option("--kappa", gr_cfg.kappa, "matrix vMF concentration");
  sim_gr->add_option("--m", gr_cfg.m, "ambient dimension (>= 5)");
  sim_gr->add_option("--sweeps", gr_cfg.gibbs_sweeps, "Gibbs sweeps per draw");
  sim_gr->add_option("--seed", gr_cfg.seed, "RNG seed");
  sim_gr->add_option("--out", gr_out, "output CSV")->required();
  sim_gr->set_config("--config");
  sim_gr->callback([&] {
    GrassmannSimData data = simulate_grassmann_process(gr_cfg);
    write_grassmann_dataset(gr_out, data.data);
    std::cout << "wrote " << gr_out << " (n = " << data.data.n() << ")\n";
  });

  // ---- fit ------------------------------------------------------------------
  CommonFit fit_opt;
  std::string fit_out;
  auto* fit = app.add_subcommand("fit", "in-sample fit report");
  add_common_options(fit, fit_opt);
  fit->add_option("--out", fit_out, "residual report CSV")->required();
  fit->callback([&] {
    Dataset data = load_dataset(fit_opt);
    Bandwidth bw = resolve_bandwidth(fit_opt, data);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<BatchEntry> batch =
        run_batch(data, fit_opt, bw, data.covariates());
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::ofstream out = open_versioned(fit_out);
    out << "index,residual,error\n";
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < data.n(); ++i) {
      out << i << ",";
      if (batch[i].prediction) {
        double d = intrinsic_distance(data.manifold(),
                                      batch[i].prediction->point,
                                      data.responses()[i]);
        out << format_double(d) << ",\n";
        sum += d * d;
        ++count;
      } else {
        out << "," << batch[i].error << "\n";
      }
    }
    std::cout << "n = " << data.n() << "\nmanifold = "
              << data.manifold().describe() << "\nbandwidth = "
              << format_double(bw.h()[0]) << "\nmean_sq_residual = "
              << format_double(count ? sum / count : 0.0)
              << "\nfit_secs = " << format_double(secs) << "\n";
  });

  // ---- predict --------------------------------------------------------------
  CommonFit pred_opt;
  std::string pred_queries, pred_out;
  auto* pred = app.add_subcommand("predict", "predict at query covariates");
  add_common_options(pred, pred_opt);
  pred->add_option("--queries", pred_queries, "query CSV (x1..xm)")->required();
  pred->add_option("--out", pred_out, "prediction CSV")->required();
  pred->callback([&] {
    Dataset data = load_dataset(pred_opt);
    Bandwidth bw = resolve_bandwidth(pred_opt, data);
    Eigen::MatrixXd queries = read_query_matrix(pred_queries);
    if (queries.cols() != data.covariate_dim())
      throw InvalidArgument("query dimension does not match the dataset");
    std::vector<BatchEntry> batch = run_batch(data, pred_opt, bw, queries);
    write_predictions(pred_out, data, queries, batch);
    int failed = 0;
    for (const auto& b : batch)
      if (!b.prediction) ++failed;
    std::cout << "wrote " << pred_out << " (" << batch.size() - failed << "/"
              << batch.size() << " predictions)\n";
  });

  // ---- cv -------------------------------------------------------------------
  CommonFit cv_opt;
  std::string cv_out;
  auto* cv = app.add_subcommand("cv", "cross-validate a bandwidth grid");
  add_common_options(cv, cv_opt);
  cv->add_option("--out", cv_out, "per-bandwidth score CSV");
  cv->callback([&] {
    if (cv_opt.cv_grid.empty()) throw InvalidArgument("pass --cv-grid");
    Dataset data = load_dataset(cv_opt);
    CvPlan plan{std::min(cv_opt.folds, data.n()),
                isotropic_grid(cv_opt.cv_grid, data.covariate_dim()),
                make_metric(cv_opt.metric), cv_opt.seed};
    CvReport rep = [&]() -> CvReport {
      if (cv_opt.method == "intrinsic") {
        KernelSpec kernel = make_kernel(cv_opt);
        return cross_validate_fn(
            data, plan,
            [&](const Dataset& train, const Bandwidth& bw,
                const Eigen::VectorXd& q) {
              return intrinsic_sphere_predict(train, kernel, bw,
                                              cv_opt.intrinsic, q)
                  .point;
            });
      }
      return cross_validate(data, make_fit_config(cv_opt, plan.grid[0]), plan);
    }();
    if (!cv_out.empty()) {
      std::ofstream out = open_versioned(cv_out);
      out << "h,mean_score,chosen\n";
      for (std::size_t g = 0; g < plan.grid.size(); ++g)
        out << format_double(cv_opt.cv_grid[g]) << ","
            << format_double(rep.mean_scores[g]) << ","
            << (static_cast<int>(g) == rep.chosen_index ? 1 : 0) << "\n";
    }
    std::cout << "chosen_bandwidth = " << format_double(rep.chosen.h()[0])
              << "\nchosen_mean_score = "
              << format_double(rep.mean_scores[rep.chosen_index]) << "\n";
  });

  // ---- bench ----------------------------------------------------------------
  CommonFit bench_opt;
  std::string bench_queries, bench_out;
  int bench_trials = 5;
  auto* bench = app.add_subcommand(
      "bench", "per-prediction timing of the extrinsic and intrinsic methods");
  add_common_options(bench, bench_opt);
  bench->add_option("--queries", bench_queries,
                    "query CSV (default: first training covariates)");
  bench->add_option("--trials", bench_trials, "timing repetitions");
  bench->add_option("--out", bench_out, "timing CSV");
  bench->callback([&] {
    Dataset data = load_dataset(bench_opt);
    if (data.manifold().kind() != ManifoldKind::Sphere)
      throw InvalidArgument("bench expects a sphere dataset");
    Bandwidth bw = resolve_bandwidth(bench_opt, data);
    Eigen::MatrixXd queries;
    if (bench_queries.empty()) {
      int nq = std::min(20, data.n());
      queries = data.covariates().topRows(nq);
    } else {
      queries = read_query_matrix(bench_queries);
    }
    KernelSpec kernel = make_kernel(bench_opt);
    FitConfig fc{bw};
    fc.kernel = kernel;
    auto time_all = [&](auto&& one) {
      double total = 0.0;
      for (int t = 0; t < bench_trials; ++t) {
        auto t0 = std::chrono::steady_clock::now();
        for (Eigen::Index i = 0; i < queries.rows(); ++i)
          one(queries.row(i).transpose());
        total +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
      }
      return total / (bench_trials * queries.rows());
    };
    double ext = time_all([&](const Eigen::VectorXd& q) {
      extrinsic_kernel_predict(data, fc, q);
    });
    double intr = time_all([&](const Eigen::VectorXd& q) {
      intrinsic_sphere_predict(data, kernel, bw, bench_opt.intrinsic, q);
    });
    if (!bench_out.empty()) {
      std::ofstream out = open_versioned(bench_out);
      out << "method,secs\n"
          << "extrinsic," << format_double(ext) << "\n"
          << "intrinsic," << format_double(intr) << "\n";
    }
    std::cout << "extrinsic_secs = " << format_double(ext)
              << "\nintrinsic_secs = " << format_double(intr)
              << "\nratio = " << format_double(intr / ext) << "\n";
  });

  // ---- experiments ----------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "run a canned study");
  exp->require_subcommand(1);

  SphereCompareConfig sc_cfg;
  auto* exp_sc = exp->add_subcommand(
      "sphere-compare", "extrinsic vs intrinsic accuracy and timing");
  exp_sc->add_option("--kappas", sc_cfg.kappas, "vMF concentrations")
      ->delimiter(',');
  exp_sc->add_option("--n-total", sc_cfg.n_total, "observations per kappa");
  exp_sc->add_option("--holdout", sc_cfg.holdout, "held-out observations");
  exp_sc->add_option("--train-sizes", sc_cfg.train_sizes, "training sizes")
      ->delimiter(',');
  exp_sc->add_option("--cv-grid", sc_cfg.cv_grid, "bandwidth grid")
      ->delimiter(',');
  exp_sc->add_option("--folds", sc_cfg.cv_folds, "cv folds");
  exp_sc->add_option("--cv-intrinsic-max-iters", sc_cfg.cv_intrinsic_max_iters,
                     "intrinsic iteration cap during cv");
  exp_sc->add_option("--cv-intrinsic-val-cap", sc_cfg.cv_intrinsic_val_cap,
                     "validation points per fold for the intrinsic cv (0 = all)");
  exp_sc->add_option("--timing-trials", sc_cfg.timing_trials);
  exp_sc->add_option("--seed", sc_cfg.seed);
  exp_sc->add_option("--workers", sc_cfg.workers, "parallel sweep cells");
  exp_sc->add_option("--out", sc_cfg.out_dir, "output directory")->required();
  exp_sc->set_config("--config");
  exp_sc->callback([&] {
    SphereCompareResult r = run_sphere_compare(sc_cfg);
    std::cout << "records = " << r.records.size()
              << "\nfailures = " << r.failures.size() << "\nwrote "
              << sc_cfg.out_dir << "/sphere_compare.csv\n";
  });

  SphereRateConfig sr_cfg;
  auto* exp_sr =
      exp->add_subcommand("sphere-rate", "MSE decay against sample size");
  exp_sr->add_option("--n-grid", sr_cfg.n_grid, "sample sizes")->delimiter(',');
  exp_sr->add_option("--replicates", sr_cfg.replicates);
  exp_sr->add_option("--kappa", sr_cfg.kappa);
  exp_sr->add_option("--queries", sr_cfg.n_queries, "queries per replicate");
  exp_sr->add_option("--h-scale", sr_cfg.h_scale, "h = h_scale * n^(-1/7)");
  exp_sr->add_option("--seed", sr_cfg.seed);
  exp_sr->add_option("--workers", sr_cfg.workers);
  exp_sr->add_option("--out", sr_cfg.out_dir, "output directory")->required();
  exp_sr->set_config("--config");
  exp_sr->callback([&] {
    SphereRateResult r = run_sphere_rate(sr_cfg);
    std::cout << "slope = " << format_double(r.slope)
              << "\nslope_stderr = " << format_double(r.slope_stderr)
              << "\nwrote " << sr_cfg.out_dir << "/sphere_rate.csv\n";
  });

  GrassmannSyntheticConfig gs_cfg;
  auto* exp_gs = exp->add_subcommand(
      "grassmann-synthetic", "dimension recovery on the synthetic process");
  exp_gs->add_option("--n1", gs_cfg.sim.n1);
  exp_gs->add_option("--n2", gs_cfg.sim.n2);
  exp_gs->add_option("--kappa", gs_cfg.sim.kappa);
  exp_gs->add_option("--m", gs_cfg.sim.m);
  exp_gs->add_option("--sweeps", gs_cfg.sim.gibbs_sweeps);
  exp_gs->add_option("--seed", gs_cfg.sim.seed);
  exp_gs->add_option("--cv-grid", gs_cfg.cv_grid)->delimiter(',');
  exp_gs->add_option("--folds", gs_cfg.cv_folds);
  exp_gs->add_option("--cv-seed", gs_cfg.cv_seed);
  exp_gs->add_option("--out", gs_cfg.out_dir, "output directory")->required();
  exp_gs->set_config("--config");
  exp_gs->callback([&] {
    GrassmannSyntheticResult r = run_grassmann_synthetic(gs_cfg);
    std::cout << "chosen_bandwidth = " << format_double(r.chosen_bandwidth)
              << "\ndim_accuracy = " << format_double(r.dim_accuracy)
              << "\nmedian_residual = " << format_double(r.median_residual)
              << "\nmedian_consecutive = "
              << format_double(r.median_consecutive) << "\nwrote "
              << gs_cfg.out_dir << "/grassmann_synthetic.csv\n";
  });

  FinanceConfig fin_cfg;
  auto* exp_fin =
      exp->add_subcommand("finance", "weekly price-covariance eigenbases");
  exp_fin->add_option("--prices", fin_cfg.prices_path, "price CSV")->required();
  exp_fin->add_option("--threshold", fin_cfg.threshold, "eigenvalue cutoff");
  exp_fin->add_option("--days-per-week", fin_cfg.days_per_week);
  exp_fin->add_option("--cv-grid", fin_cfg.cv_grid)->delimiter(',');
  exp_fin->add_option("--folds", fin_cfg.cv_folds);
  exp_fin->add_option("--cv-seed", fin_cfg.cv_seed);
  exp_fin->add_option("--out", fin_cfg.out_dir, "output directory")->required();
  exp_fin->set_config("--config");
  exp_fin->callback([&] {
    FinanceResult r = run_finance_pipeline(fin_cfg);
    std::cout << "weeks = " << r.weeks
              << "\ndropped_weeks = " << r.dropped_weeks
              << "\nchosen_bandwidth = " << format_double(r.chosen_bandwidth)
              << "\nmedian_residual = " << format_double(r.median_residual)
              << "\nmedian_consecutive = "
              << format_double(r.median_consecutive) << "\nwrote "
              << fin_cfg.out_dir << "/finance.csv\n";
  });

  ShapeRegressionConfig sh_cfg;
  auto* exp_sh =
      exp->add_subcommand("shape", "landmark shape regression on (group, age)");
  exp_sh->add_option("--landmarks", sh_cfg.landmarks_path, "landmark CSV")
      ->required();
  exp_sh->add_option("--ages", sh_cfg.ages, "prediction ages")->delimiter(',');
  exp_sh->add_option("--cv-grid", sh_cfg.cv_grid)->delimiter(',');
  exp_sh->add_option("--folds", sh_cfg.cv_folds);
  exp_sh->add_option("--cv-seed", sh_cfg.cv_seed);
  exp_sh->add_flag("--dump-weights", sh_cfg.dump_weights,
                   "also write the kernel weights per grid point");
  exp_sh->add_option("--out", sh_cfg.out_dir, "output directory")->required();
  exp_sh->set_config("--config");
  exp_sh->callback([&] {
    ShapeRegressionResult r = run_shape_regression(sh_cfg);
    std::cout << "rows_used = " << r.rows_used
              << "\nskipped_rows = " << r.issues.size()
              << "\nchosen_bandwidth = " << format_double(r.chosen_bandwidth)
              << "\npredictions = " << r.predictions.size()
              << "\nfailures = " << r.failures.size() << "\nwrote "
              << sh_cfg.out_dir << "/shapes.csv\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
