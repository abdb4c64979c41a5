#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mregress/csv.hpp"
#include "mregress/regression.hpp"

namespace mregress {

// ---- landmark files ----------------------------------------------------------
//
// Schema: header  id,diag,age,x1,y1,...,xk,yk  (k >= 3 landmarks), one subject
// per row.  diag is a 0/1 group flag, age is in years.  Malformed rows are
// reported with their line numbers and skipped; the remaining rows are kept.

struct LandmarkRecord {
  std::string id;
  int diag = 0;
  double age = 0.0;
  Eigen::VectorXcd landmarks;  // raw coordinates, x + i y per landmark
  PlanarShape shape;           // centered/scaled representative
};

struct RowIssue {
  int line = 0;
  std::string message;
};

struct LandmarkIngest {
  int landmark_count = 0;
  std::vector<LandmarkRecord> records;
  std::vector<RowIssue> issues;
};

// Throws DataError for file-level problems (unreadable, bad header); row-level
// problems land in issues.
LandmarkIngest ingest_landmarks(const std::string& path);

void write_landmarks(const std::string& path,
                     const std::vector<LandmarkRecord>& records);

// Covariates (diag, age) against the shape responses.
Dataset landmarks_to_dataset(const std::vector<LandmarkRecord>& records);

// ---- price files -------------------------------------------------------------
//
// Schema: header  date,asset...,asset  with ISO dates strictly ascending, one
// trading day per row, strictly positive closes.  Any malformed row aborts
// the ingest with a line-accurate DataError: a silently dropped day would
// corrupt the week structure downstream.

struct PriceTable {
  std::vector<long> days;  // days since 1970-01-01
  std::vector<std::string> assets;
  Eigen::MatrixXd closes;  // rows match days
};

PriceTable ingest_prices(const std::string& path);
void write_prices(const std::string& path, const PriceTable& table);

// ---- weekly covariance eigenbases -------------------------------------------
//
// Group trading days into Monday-started calendar weeks, keep the weeks with
// exactly days_per_week rows, and reduce each to the span of the eigenvectors
// of the within-week sample covariance (unbiased, /(days-1)) with eigenvalue
// above the threshold.  Weeks whose covariance has no eigenvalue above the
// threshold (constant prices) raise DataError.

struct WeeklyBases {
  Dataset data;                    // covariate: 1-based ordinal of the week
  std::vector<long> week_numbers;  // calendar week index per retained week
  std::vector<int> dims;           // retained eigenspace dimension per week
  int dropped_weeks = 0;           // weeks with a wrong number of trading days
};

WeeklyBases weekly_eigenbases(const PriceTable& table, double threshold = 1e-10,
                              int days_per_week = 5);

// ---- generic dataset serialization ------------------------------------------
//
// Sphere datasets: columns  x1..xm, y1..y_{d+1}  and optionally mu1..mu_{d+1}
// for the noiseless directions.  Grassmann datasets: covariate columns x1..xm
// followed by the flattened projection-matrix embedding g1_1..g<m>_<m>; on
// read the basis is recovered by projection (exact on the embedded image).

struct SphereFile {
  Dataset data;
  std::vector<SpherePoint> means;  // empty when the file has no mu columns
};

void write_sphere_dataset(const std::string& path, const Dataset& data,
                          const std::vector<SpherePoint>* means = nullptr);
SphereFile read_sphere_dataset(const std::string& path);

void write_grassmann_dataset(const std::string& path, const Dataset& data);
Dataset read_grassmann_dataset(const std::string& path);

// Query files: header x1..xm, one query point per row.
Eigen::MatrixXd read_query_matrix(const std::string& path);
void write_query_matrix(const std::string& path, const Eigen::MatrixXd& queries);

}  // namespace mregress
