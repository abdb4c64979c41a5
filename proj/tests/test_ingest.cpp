#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mregress/ingest.hpp"
#include "mregress/simulate.hpp"

using namespace mregress;

namespace {

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / "mregress_ingest_tests";
  std::filesystem::create_directories(p);
  return p;
}

std::string write_file(const std::string& name, const std::string& body) {
  auto path = temp_dir() / name;
  std::ofstream out(path);
  out << body;
  return path.string();
}

bool mentions_line(const std::string& what, int line) {
  return what.find("line " + std::to_string(line)) != std::string::npos;
}

}  // namespace

TEST_CASE("csv primitives") {
  std::string p = write_file("basic.csv",
                             "# a comment\n"
                             "\n"
                             "a,b,c\n"
                             "1,2,3\n"
                             "# interior comment\n"
                             "4,,6\n");
  CsvFile f = read_csv(p);
  REQUIRE(f.header.size() == 3);
  CHECK(f.header[0] == "a");
  REQUIRE(f.rows.size() == 2);
  CHECK(f.rows[0].line == 4);  // comments and blanks still count lines
  CHECK(f.rows[1].line == 6);
  CHECK(f.rows[1].fields[1].empty());

  CHECK_THROWS_AS(read_csv((temp_dir() / "missing.csv").string()), DataError);
  std::string empty = write_file("empty.csv", "# nothing\n");
  CHECK_THROWS_AS(read_csv(empty), DataError);

  CHECK(parse_number("1.25", 1, "v") == 1.25);
  CHECK(parse_number("-3e2", 1, "v") == -300.0);
  CHECK_THROWS_AS(parse_number("1.2x", 7, "v"), DataError);
  CHECK_THROWS_AS(parse_number("", 7, "v"), DataError);
  CHECK(parse_number(" 1 ", 7, "v") == 1.0);  // surrounding whitespace is fine
  CHECK_THROWS_AS(parse_number("1 2", 7, "v"), DataError);
  try {
    parse_number("oops", 42, "age");
    CHECK(false);
  } catch (const DataError& e) {
    CHECK(mentions_line(e.what(), 42));
  }

  // %.17g output round-trips doubles exactly
  for (double v : {1.0 / 3.0, 1e-300, -0.1, 12345.6789, 2e17})
    CHECK(parse_number(format_double(v), 1, "v") == v);
}

TEST_CASE("civil date arithmetic and weeks") {
  CHECK(days_from_civil(1970, 1, 1) == 0);
  CHECK(days_from_civil(1970, 1, 2) == 1);
  CHECK(days_from_civil(1969, 12, 31) == -1);
  CHECK(days_from_civil(2000, 1, 1) == 10957);

  int y, m, d;
  civil_from_days(10957, y, m, d);
  CHECK(y == 2000);
  CHECK(m == 1);
  CHECK(d == 1);
  for (long z = -1000; z <= 1000; z += 37) {
    civil_from_days(z, y, m, d);
    CHECK(days_from_civil(y, m, d) == z);
  }

  CHECK(parse_iso_date("1970-01-01", 1) == 0);
  CHECK(parse_iso_date("2024-02-29", 1) == days_from_civil(2024, 2, 29));
  CHECK_THROWS_AS(parse_iso_date("2023-02-29", 3), DataError);
  CHECK_THROWS_AS(parse_iso_date("2023-13-01", 3), DataError);
  CHECK_THROWS_AS(parse_iso_date("2023-1-01", 3), DataError);
  CHECK_THROWS_AS(parse_iso_date("20230101", 3), DataError);
  CHECK(format_iso_date(10957) == "2000-01-01");

  // 1970-01-01 is a Thursday; its Monday-started week spans day -3 to day 3
  CHECK(week_of(0) == week_of(3));
  CHECK(week_of(0) == week_of(-3));
  CHECK(week_of(4) == week_of(0) + 1);
  CHECK(week_of(-4) == week_of(0) - 1);
}

TEST_CASE("landmark ingestion tolerates bad rows and reports line numbers") {
  std::string body =
      "id,diag,age,x1,y1,x2,y2,x3,y3\n"
      "s1,0,10.5,0,0,1,0,1,1\n"
      "s2,1,12,0,0,2,0,2,2\n"
      "bad1,2,12,0,0,1,0,1,1\n"        // diag out of range
      "bad2,0,oops,0,0,1,0,1,1\n"      // non-numeric age
      "bad3,0,12,0,0,1,0\n"            // wrong field count
      "bad4,0,12,3,3,3,3,3,3\n"        // degenerate landmarks
      "s3,1,14.25,0,1,2,0,1,3\n";
  std::string p = write_file("landmarks.csv", body);
  LandmarkIngest ing = ingest_landmarks(p);
  CHECK(ing.landmark_count == 3);
  REQUIRE(ing.records.size() == 3);
  REQUIRE(ing.issues.size() == 4);
  CHECK(ing.issues[0].line == 4);
  CHECK(ing.issues[1].line == 5);
  CHECK(ing.issues[2].line == 6);
  CHECK(ing.issues[3].line == 7);
  for (const auto& issue : ing.issues)
    CHECK(mentions_line(issue.message, issue.line));

  CHECK(ing.records[0].id == "s1");
  CHECK(ing.records[1].diag == 1);
  CHECK(ing.records[2].age == 14.25);
  CHECK(ing.records[0].landmarks[1] == std::complex<double>(1, 0));

  // shapes are normalized representatives of the raw landmarks
  PlanarShape direct = shape_from_landmarks(ing.records[0].landmarks);
  CHECK(intrinsic_distance(ManifoldSpec::planar_shape(3),
                           ing.records[0].shape, direct) < 1e-7);

  Dataset d = landmarks_to_dataset(ing.records);
  CHECK(d.n() == 3);
  CHECK(d.covariate_dim() == 2);
  CHECK(d.covariates()(1, 0) == 1.0);
  CHECK(d.covariates()(2, 1) == 14.25);

  // round trip: write then re-ingest reproduces ids and coordinates
  std::string p2 = (temp_dir() / "landmarks_rt.csv").string();
  write_landmarks(p2, ing.records);
  LandmarkIngest back = ingest_landmarks(p2);
  CHECK(back.issues.empty());
  REQUIRE(back.records.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.records[i].id == ing.records[i].id);
    CHECK(back.records[i].age == ing.records[i].age);
    CHECK(back.records[i].landmarks == ing.records[i].landmarks);
  }

  // file-level failures
  std::string bad_header = write_file("bad_header.csv", "id,age\ns,1\n");
  CHECK_THROWS_AS(ingest_landmarks(bad_header), DataError);
  std::string odd_cols = write_file(
      "odd_cols.csv", "id,diag,age,x1,y1,x2,y2,x3,z9\ns,0,1,0,0,1,0,1,1\n");
  CHECK_THROWS_AS(ingest_landmarks(odd_cols), DataError);
}

TEST_CASE("price ingestion is strict") {
  std::string good =
      "date,AAA,BBB\n"
      "2023-01-02,10,20\n"
      "2023-01-03,10.5,19.5\n"
      "2023-01-04,11,21\n";
  PriceTable t = ingest_prices(write_file("prices.csv", good));
  REQUIRE(t.days.size() == 3);
  CHECK(t.assets == std::vector<std::string>{"AAA", "BBB"});
  CHECK(t.days[0] == days_from_civil(2023, 1, 2));
  CHECK(t.closes(1, 0) == 10.5);

  std::string p2 = (temp_dir() / "prices_rt.csv").string();
  write_prices(p2, t);
  PriceTable back = ingest_prices(p2);
  CHECK(back.days == t.days);
  CHECK(back.closes == t.closes);

  auto expect_line = [&](const std::string& name, const std::string& body,
                         int line) {
    try {
      ingest_prices(write_file(name, body));
      CHECK_MESSAGE(false, name);
    } catch (const DataError& e) {
      CHECK_MESSAGE(mentions_line(e.what(), line), name, ": ",
                    std::string(e.what()));
    }
  };
  expect_line("pr_order.csv",
              "date,A,B\n2023-01-03,1,1\n2023-01-02,1,1\n", 3);
  expect_line("pr_dup.csv",
              "date,A,B\n2023-01-03,1,1\n2023-01-03,1,1\n", 3);
  expect_line("pr_num.csv",
              "date,A,B\n2023-01-03,1,1\n2023-01-04,x,1\n", 3);
  expect_line("pr_neg.csv",
              "date,A,B\n2023-01-03,-1,1\n", 2);
  expect_line("pr_zero.csv",
              "date,A,B\n2023-01-03,0,1\n", 2);
  expect_line("pr_fields.csv",
              "date,A,B\n2023-01-03,1,2\n2023-01-04,1\n", 3);
  expect_line("pr_date.csv",
              "date,A,B\n2023-02-30,1,1\n", 2);

  std::string one_asset = write_file("pr_one.csv", "date,A\n2023-01-03,1\n");
  CHECK_THROWS_AS(ingest_prices(one_asset), DataError);
}

TEST_CASE("weekly eigenbases") {
  // Three assets over four weeks: two generic full weeks, one rank-one week,
  // one short (dropped) week.
  PriceTable t;
  t.assets = {"A", "B", "C"};
  long monday = days_from_civil(2023, 1, 2);  // a Monday
  std::vector<long> days;
  std::vector<Eigen::Vector3d> rows;
  Rng rng(7);

  auto add_week = [&](long start, int count, auto price_fn) {
    for (int i = 0; i < count; ++i) {
      days.push_back(start + i);
      rows.push_back(price_fn(i));
    }
  };
  // generic week: independent jitter around a base level
  add_week(monday, 5, [&](int) {
    return Eigen::Vector3d(10 + rng.uniform(), 20 + rng.uniform(),
                           30 + rng.uniform());
  });
  // rank-one week: all variation along a single direction
  Eigen::Vector3d dir = Eigen::Vector3d(1, 2, -1).normalized();
  add_week(monday + 7, 5,
           [&](int i) { return (Eigen::Vector3d(10, 10, 10) + i * dir).eval(); });
  // short week (holiday): must be dropped
  add_week(monday + 14, 3, [&](int) {
    return Eigen::Vector3d(10 + rng.uniform(), 20 + rng.uniform(),
                           30 + rng.uniform());
  });
  // another generic week
  add_week(monday + 21, 5, [&](int) {
    return Eigen::Vector3d(10 + rng.uniform(), 20 + rng.uniform(),
                           30 + rng.uniform());
  });

  t.days = days;
  t.closes.resize(static_cast<int>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i)
    t.closes.row(static_cast<int>(i)) = rows[i].transpose();

  WeeklyBases wb = weekly_eigenbases(t, 1e-10, 5);
  CHECK(wb.dropped_weeks == 1);
  REQUIRE(wb.data.n() == 3);
  CHECK(wb.week_numbers[1] == wb.week_numbers[0] + 1);
  CHECK(wb.week_numbers[2] == wb.week_numbers[0] + 3);
  // covariate is the 1-based retained-week ordinal
  CHECK(wb.data.covariates()(0, 0) == 1.0);
  CHECK(wb.data.covariates()(2, 0) == 3.0);
  CHECK(wb.dims[0] == 3);  // generic 5-day week has full-rank 3x3 covariance
  CHECK(wb.dims[1] == 1);  // the engineered rank-one week
  CHECK(wb.dims[2] == 3);

  // the rank-one week's subspace is exactly the movement direction
  auto g = std::get<GrassmannPoint>(wb.data.responses()[1]);
  REQUIRE(g.subspace_dim() == 1);
  CHECK(std::abs(std::abs(g.basis().col(0).dot(dir)) - 1.0) < 1e-10);

  // oracle for the generic week: eigenvectors of the unbiased covariance
  Eigen::MatrixXd week = t.closes.topRows(5);
  Eigen::RowVector3d mean = week.colwise().mean();
  Eigen::MatrixXd centered = week.rowwise() - mean;
  Eigen::Matrix3d cov = centered.transpose() * centered / 4.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  auto g0 = std::get<GrassmannPoint>(wb.data.responses()[0]);
  Eigen::MatrixXd p_mine = g0.basis() * g0.basis().transpose();
  Eigen::MatrixXd p_oracle =
      es.eigenvectors() * es.eigenvectors().transpose();  // full rank here
  CHECK((p_mine - p_oracle).norm() < 1e-9);

  // constant prices: no eigenvalue clears the threshold
  PriceTable flat;
  flat.assets = {"A", "B"};
  for (int i = 0; i < 5; ++i) {
    flat.days.push_back(monday + i);
  }
  flat.closes = Eigen::MatrixXd::Ones(5, 2);
  CHECK_THROWS_AS(weekly_eigenbases(flat, 1e-10, 5), DataError);
}

TEST_CASE("sphere dataset files round trip") {
  SphereSimConfig cfg;
  cfg.n = 25;
  cfg.kappa = 5;
  cfg.seed = 3;
  SphereSimData sim = simulate_sphere_regression(cfg);
  std::string p = (temp_dir() / "sphere_rt.csv").string();
  write_sphere_dataset(p, sim.data, &sim.means);

  // version stamp leads the file
  std::ifstream in(p);
  std::string first;
  std::getline(in, first);
  CHECK(first == kFileVersion);

  SphereFile back = read_sphere_dataset(p);
  CHECK(back.data.covariates() == sim.data.covariates());
  CHECK(back.data.embedded() == sim.data.embedded());
  REQUIRE(back.means.size() == 25);
  for (int i = 0; i < 25; ++i)
    CHECK(back.means[i].coords() == sim.means[i].coords());

  // means are optional
  std::string p2 = (temp_dir() / "sphere_nm.csv").string();
  write_sphere_dataset(p2, sim.data);
  CHECK(read_sphere_dataset(p2).means.empty());

  std::string bad = write_file("sphere_bad.csv",
                               "x1,y1,y2,y3\n0,1,1,1\n");  // off-sphere row
  CHECK_THROWS_AS(read_sphere_dataset(bad), DataError);
}

TEST_CASE("grassmann dataset files round trip") {
  GrassmannSimConfig cfg;
  cfg.n1 = 6;
  cfg.n2 = 4;
  cfg.kappa = 1;
  cfg.seed = 11;
  GrassmannSimData sim = simulate_grassmann_process(cfg);
  std::string p = (temp_dir() / "grassmann_rt.csv").string();
  write_grassmann_dataset(p, sim.data);
  Dataset back = read_grassmann_dataset(p);
  CHECK(back.covariates() == sim.data.covariates());
  CHECK((back.embedded() - sim.data.embedded()).cwiseAbs().maxCoeff() < 1e-9);
  for (int i = 0; i < back.n(); ++i)
    CHECK(std::get<GrassmannPoint>(back.responses()[i]).subspace_dim() ==
          sim.dims[i]);
}

TEST_CASE("query matrices round trip") {
  Eigen::MatrixXd q(3, 2);
  q << 0.5, -1.5, 2, 3, -4.25, 0;
  std::string p = (temp_dir() / "queries.csv").string();
  write_query_matrix(p, q);
  CHECK(read_query_matrix(p) == q);

  std::string ragged = write_file("queries_bad.csv", "x1,x2\n1,2\n3\n");
  CHECK_THROWS_AS(read_query_matrix(ragged), DataError);
  std::string nonnum = write_file("queries_nn.csv", "x1\nfoo\n");
  CHECK_THROWS_AS(read_query_matrix(nonnum), DataError);
}
