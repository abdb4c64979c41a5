#include "mregress/ingest.hpp"

#include <cmath>
#include <fstream>

namespace mregress {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << kFileVersion << "\n";
  return out;
}

// Number of consecutive header names prefix1, prefix2, ... starting at offset.
int count_prefixed(const std::vector<std::string>& header, std::size_t offset,
                   const std::string& prefix) {
  int count = 0;
  while (offset + count < header.size() &&
         header[offset + count] == prefix + std::to_string(count + 1))
    ++count;
  return count;
}

}  // namespace

LandmarkIngest ingest_landmarks(const std::string& path) {
  CsvFile file = read_csv(path);
  const auto& h = file.header;
  if (h.size() < 9 || h[0] != "id" || h[1] != "diag" || h[2] != "age")
    throw DataError(path + ": header must start with id,diag,age");
  const int k = static_cast<int>((h.size() - 3) / 2);
  if (h.size() != 3 + 2 * static_cast<std::size_t>(k))
    throw DataError(path + ": unpaired landmark columns in header");
  for (int j = 0; j < k; ++j) {
    std::string n = std::to_string(j + 1);
    if (h[3 + 2 * j] != "x" + n || h[4 + 2 * j] != "y" + n)
      throw DataError(path + ": landmark columns must be x1,y1,...,x" +
                      std::to_string(k) + ",y" + std::to_string(k));
  }

  LandmarkIngest out;
  out.landmark_count = k;
  for (const CsvRow& row : file.rows) {
    try {
      if (row.fields.size() != h.size())
        throw DataError("line " + std::to_string(row.line) + ": expected " +
                        std::to_string(h.size()) + " fields, got " +
                        std::to_string(row.fields.size()));
      if (row.fields[0].empty())
        throw DataError("line " + std::to_string(row.line) + ": empty id");
      double diag = parse_number(row.fields[1], row.line, "diag");
      if (diag != 0.0 && diag != 1.0)
        throw DataError("line " + std::to_string(row.line) +
                        ": diag must be 0 or 1");
      double age = parse_number(row.fields[2], row.line, "age");
      Eigen::VectorXcd lm(k);
      for (int j = 0; j < k; ++j) {
        double x = parse_number(row.fields[3 + 2 * j], row.line,
                                "x" + std::to_string(j + 1));
        double y = parse_number(row.fields[4 + 2 * j], row.line,
                                "y" + std::to_string(j + 1));
        lm[j] = std::complex<double>(x, y);
      }
      PlanarShape shape = [&] {
        try {
          return shape_from_landmarks(lm);
        } catch (const Error& e) {
          // carry the line number; the shape routine cannot know it
          throw DataError("line " + std::to_string(row.line) + ": " + e.what());
        }
      }();
      out.records.push_back(LandmarkRecord{row.fields[0], static_cast<int>(diag),
                                           age, std::move(lm), std::move(shape)});
    } catch (const Error& e) {
      out.issues.push_back(RowIssue{row.line, e.what()});
    }
  }
  return out;
}

void write_landmarks(const std::string& path,
                     const std::vector<LandmarkRecord>& records) {
  if (records.empty()) throw InvalidArgument("no landmark records to write");
  const int k = static_cast<int>(records[0].landmarks.size());
  std::ofstream out = open_out(path);
  out << "id,diag,age";
  for (int j = 0; j < k; ++j)
    out << ",x" << j + 1 << ",y" << j + 1;
  out << "\n";
  for (const auto& r : records) {
    if (r.landmarks.size() != k)
      throw InvalidArgument("landmark records disagree on landmark count");
    out << r.id << "," << r.diag << "," << format_double(r.age);
    for (int j = 0; j < k; ++j)
      out << "," << format_double(r.landmarks[j].real()) << ","
          << format_double(r.landmarks[j].imag());
    out << "\n";
  }
}

Dataset landmarks_to_dataset(const std::vector<LandmarkRecord>& records) {
  if (records.empty()) throw InvalidArgument("no landmark records");
  const int n = static_cast<int>(records.size());
  const int k = static_cast<int>(records[0].landmarks.size());
  Eigen::MatrixXd cov(n, 2);
  std::vector<ManifoldPoint> responses;
  responses.reserve(n);
  for (int i = 0; i < n; ++i) {
    cov(i, 0) = records[i].diag;
    cov(i, 1) = records[i].age;
    responses.push_back(records[i].shape);
  }
  return Dataset(std::move(cov), std::move(responses),
                 ManifoldSpec::planar_shape(k));
}

PriceTable ingest_prices(const std::string& path) {
  CsvFile file = read_csv(path);
  const auto& h = file.header;
  if (h.empty() || h[0] != "date")
    throw DataError(path + ": header must start with 'date'");
  if (h.size() < 3) throw DataError(path + ": need at least two asset columns");

  PriceTable table;
  table.assets.assign(h.begin() + 1, h.end());
  const int m = static_cast<int>(table.assets.size());
  table.closes.resize(file.rows.size(), m);
  table.days.reserve(file.rows.size());
  for (std::size_t r = 0; r < file.rows.size(); ++r) {
    const CsvRow& row = file.rows[r];
    if (row.fields.size() != h.size())
      throw DataError("line " + std::to_string(row.line) + ": expected " +
                      std::to_string(h.size()) + " fields, got " +
                      std::to_string(row.fields.size()));
    long day = parse_iso_date(row.fields[0], row.line);
    if (!table.days.empty() && day <= table.days.back())
      throw DataError("line " + std::to_string(row.line) +
                      ": dates must be strictly ascending");
    table.days.push_back(day);
    for (int j = 0; j < m; ++j) {
      double v = parse_number(row.fields[j + 1], row.line, table.assets[j]);
      if (!(v > 0.0))
        throw DataError("line " + std::to_string(row.line) + ": " +
                        table.assets[j] + " close must be positive");
      table.closes(r, j) = v;
    }
  }
  if (table.days.empty()) throw DataError(path + ": no data rows");
  return table;
}

void write_prices(const std::string& path, const PriceTable& table) {
  std::ofstream out = open_out(path);
  out << "date";
  for (const auto& a : table.assets) out << "," << a;
  out << "\n";
  for (std::size_t r = 0; r < table.days.size(); ++r) {
    out << format_iso_date(table.days[r]);
    for (Eigen::Index j = 0; j < table.closes.cols(); ++j)
      out << "," << format_double(table.closes(r, j));
    out << "\n";
  }
}

WeeklyBases weekly_eigenbases(const PriceTable& table, double threshold,
                              int days_per_week) {
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw InvalidArgument("eigenvalue threshold must be positive");
  if (days_per_week < 2)
    throw InvalidArgument("need at least 2 trading days per week");
  const int m = static_cast<int>(table.assets.size());
  if (m < 2) throw InvalidArgument("need at least two assets");
  const int nrows = static_cast<int>(table.days.size());
  if (nrows < 1) throw InvalidArgument("price table is empty");

  std::vector<ManifoldPoint> responses;
  std::vector<long> weeks;
  std::vector<int> dims;
  int dropped = 0;

  int start = 0;
  while (start < nrows) {
    long week = week_of(table.days[start]);
    int end = start;
    while (end < nrows && week_of(table.days[end]) == week) ++end;
    int count = end - start;
    if (count != days_per_week) {
      ++dropped;
      start = end;
      continue;
    }
    Eigen::MatrixXd block = table.closes.middleRows(start, count);
    Eigen::MatrixXd centered = block.rowwise() - block.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / double(count - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success)
      throw DataError("week " + std::to_string(week) +
                      ": covariance eigendecomposition failed");
    int k = 0;
    for (int j = 0; j < m; ++j)
      if (es.eigenvalues()[j] > threshold) ++k;
    if (k < 1)
      throw DataError("week " + std::to_string(week) +
                      ": no covariance eigenvalue above the threshold");
    Eigen::MatrixXd basis(m, k);
    for (int j = 0; j < k; ++j)
      basis.col(j) = es.eigenvectors().col(m - 1 - j);  // descending order
    responses.push_back(GrassmannPoint(std::move(basis)));
    weeks.push_back(week);
    dims.push_back(k);
    start = end;
  }
  if (responses.empty()) throw DataError("no full trading weeks in the data");

  const int w = static_cast<int>(responses.size());
  Eigen::MatrixXd cov_mat(w, 1);
  for (int i = 0; i < w; ++i) cov_mat(i, 0) = i + 1;
  return WeeklyBases{Dataset(std::move(cov_mat), std::move(responses),
                             ManifoldSpec::grassmann_mixed(m)),
                     std::move(weeks), std::move(dims), dropped};
}

void write_sphere_dataset(const std::string& path, const Dataset& data,
                          const std::vector<SpherePoint>* means) {
  if (data.manifold().kind() != ManifoldKind::Sphere)
    throw InvalidArgument("not a sphere dataset");
  if (means && static_cast<int>(means->size()) != data.n())
    throw InvalidArgument("means do not match dataset size");
  const int m = data.covariate_dim();
  const int p = data.manifold().sphere_dim() + 1;
  std::ofstream out = open_out(path);
  for (int j = 0; j < m; ++j) out << (j ? "," : "") << "x" << j + 1;
  for (int j = 0; j < p; ++j) out << ",y" << j + 1;
  if (means)
    for (int j = 0; j < p; ++j) out << ",mu" << j + 1;
  out << "\n";
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < m; ++j)
      out << (j ? "," : "") << format_double(data.covariates()(i, j));
    for (int j = 0; j < p; ++j)
      out << "," << format_double(data.embedded()(i, j));
    if (means)
      for (int j = 0; j < p; ++j)
        out << "," << format_double((*means)[i].coords()[j]);
    out << "\n";
  }
}

SphereFile read_sphere_dataset(const std::string& path) {
  CsvFile file = read_csv(path);
  const int m = count_prefixed(file.header, 0, "x");
  const int p = count_prefixed(file.header, m, "y");
  const int pm = count_prefixed(file.header, m + p, "mu");
  if (m < 1 || p < 2 || (pm != 0 && pm != p) ||
      file.header.size() != static_cast<std::size_t>(m + p + pm))
    throw DataError(path + ": expected columns x1..xm,y1..yp[,mu1..mup]");
  if (file.rows.empty()) throw DataError(path + ": no data rows");

  Eigen::MatrixXd cov(file.rows.size(), m);
  std::vector<ManifoldPoint> responses;
  std::vector<SpherePoint> mus;
  responses.reserve(file.rows.size());
  for (std::size_t i = 0; i < file.rows.size(); ++i) {
    const CsvRow& row = file.rows[i];
    if (row.fields.size() != file.header.size())
      throw DataError("line " + std::to_string(row.line) + ": expected " +
                      std::to_string(file.header.size()) + " fields");
    for (int j = 0; j < m; ++j)
      cov(i, j) = parse_number(row.fields[j], row.line, file.header[j]);
    Eigen::VectorXd y(p);
    for (int j = 0; j < p; ++j)
      y[j] = parse_number(row.fields[m + j], row.line, file.header[m + j]);
    try {
      responses.push_back(SpherePoint(y));
    } catch (const Error& e) {
      throw DataError("line " + std::to_string(row.line) + ": " + e.what());
    }
    if (pm > 0) {
      Eigen::VectorXd mu(p);
      for (int j = 0; j < p; ++j)
        mu[j] = parse_number(row.fields[m + p + j], row.line,
                             file.header[m + p + j]);
      try {
        mus.push_back(SpherePoint(mu));
      } catch (const Error& e) {
        throw DataError("line " + std::to_string(row.line) + ": " + e.what());
      }
    }
  }
  return SphereFile{Dataset(std::move(cov), std::move(responses),
                            ManifoldSpec::sphere(p - 1)),
                    std::move(mus)};
}

void write_grassmann_dataset(const std::string& path, const Dataset& data) {
  if (data.manifold().kind() != ManifoldKind::Grassmann)
    throw InvalidArgument("not a Grassmann dataset");
  const int m = data.covariate_dim();
  const int dim = data.manifold().space_dim();
  std::ofstream out = open_out(path);
  for (int j = 0; j < m; ++j) out << (j ? "," : "") << "x" << j + 1;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) out << ",g" << r + 1 << "_" << c + 1;
  out << "\n";
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < m; ++j)
      out << (j ? "," : "") << format_double(data.covariates()(i, j));
    for (Eigen::Index j = 0; j < data.embedded().cols(); ++j)
      out << "," << format_double(data.embedded()(i, j));
    out << "\n";
  }
}

Dataset read_grassmann_dataset(const std::string& path) {
  CsvFile file = read_csv(path);
  const int m = count_prefixed(file.header, 0, "x");
  if (m < 1) throw DataError(path + ": expected covariate columns x1..xm");
  const int rem = static_cast<int>(file.header.size()) - m;
  const int dim = static_cast<int>(std::llround(std::sqrt(double(rem))));
  if (rem < 1 || dim * dim != rem)
    throw DataError(path + ": embedding columns do not form a square matrix");
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      if (file.header[m + r * dim + c] !=
          "g" + std::to_string(r + 1) + "_" + std::to_string(c + 1))
        throw DataError(path + ": embedding columns must be g1_1..g" +
                        std::to_string(dim) + "_" + std::to_string(dim));
  if (file.rows.empty()) throw DataError(path + ": no data rows");

  ManifoldSpec spec = ManifoldSpec::grassmann_mixed(dim);
  Eigen::MatrixXd cov(file.rows.size(), m);
  std::vector<ManifoldPoint> responses;
  responses.reserve(file.rows.size());
  for (std::size_t i = 0; i < file.rows.size(); ++i) {
    const CsvRow& row = file.rows[i];
    if (row.fields.size() != file.header.size())
      throw DataError("line " + std::to_string(row.line) + ": expected " +
                      std::to_string(file.header.size()) + " fields");
    for (int j = 0; j < m; ++j)
      cov(i, j) = parse_number(row.fields[j], row.line, file.header[j]);
    AmbientVector g(rem);
    for (int j = 0; j < rem; ++j)
      g[j] = parse_number(row.fields[m + j], row.line, file.header[m + j]);
    try {
      responses.push_back(unembed(spec, g));
    } catch (const Error& e) {
      throw DataError("line " + std::to_string(row.line) + ": " + e.what());
    }
  }
  return Dataset(std::move(cov), std::move(responses), spec);
}

Eigen::MatrixXd read_query_matrix(const std::string& path) {
  CsvFile file = read_csv(path);
  const int m = count_prefixed(file.header, 0, "x");
  if (m < 1 || file.header.size() != static_cast<std::size_t>(m))
    throw DataError(path + ": expected query columns x1..xm");
  Eigen::MatrixXd q(file.rows.size(), m);
  for (std::size_t i = 0; i < file.rows.size(); ++i) {
    const CsvRow& row = file.rows[i];
    if (row.fields.size() != static_cast<std::size_t>(m))
      throw DataError("line " + std::to_string(row.line) + ": expected " +
                      std::to_string(m) + " fields");
    for (int j = 0; j < m; ++j)
      q(i, j) = parse_number(row.fields[j], row.line, file.header[j]);
  }
  if (q.rows() == 0) throw DataError(path + ": no query rows");
  return q;
}

void write_query_matrix(const std::string& path, const Eigen::MatrixXd& queries) {
  std::ofstream out = open_out(path);
  for (Eigen::Index j = 0; j < queries.cols(); ++j)
    out << (j ? "," : "") << "x" << j + 1;
  out << "\n";
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    for (Eigen::Index j = 0; j < queries.cols(); ++j)
      out << (j ? "," : "") << format_double(queries(i, j));
    out << "\n";
  }
}

}  // namespace mregress
