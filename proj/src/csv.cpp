#include "mregress/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace mregress {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  CsvFile file;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = line;
    if (!stripped.empty() && stripped.back() == '\r') stripped.pop_back();
    if (stripped.empty() || stripped[0] == '#') continue;
    if (!have_header) {
      file.header = split_fields(stripped);
      have_header = true;
    } else {
      file.rows.push_back(CsvRow{lineno, split_fields(stripped)});
    }
  }
  if (!have_header) throw DataError(path + " has no header line");
  return file;
}

double parse_number(const std::string& field, int line, const std::string& what) {
  std::size_t a = 0, b = field.size();
  while (a < b && std::isspace(static_cast<unsigned char>(field[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(field[b - 1]))) --b;
  double v = 0.0;
  auto res = std::from_chars(field.data() + a, field.data() + b, v);
  if (res.ec != std::errc() || res.ptr != field.data() + b || a == b)
    throw DataError("line " + std::to_string(line) + ": " + what +
                    " is not a number: '" + field + "'");
  if (!std::isfinite(v))
    throw DataError("line " + std::to_string(line) + ": " + what +
                    " is not finite");
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Howard Hinnant's civil-days algorithm.
long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, int& y, int& m, int& d) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long yr = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yr + (m <= 2));
}

long parse_iso_date(const std::string& field, int line) {
  int y = 0, m = 0, d = 0;
  char extra = 0;
  if (std::sscanf(field.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &extra) != 3 ||
      field.size() != 10)
    throw DataError("line " + std::to_string(line) +
                    ": expected YYYY-MM-DD date, got '" + field + "'");
  long days = days_from_civil(y, m, d);
  int ry, rm, rd;
  civil_from_days(days, ry, rm, rd);
  if (ry != y || rm != m || rd != d)
    throw DataError("line " + std::to_string(line) + ": '" + field +
                    "' is not a real date");
  return days;
}

std::string format_iso_date(long days) {
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
  return buf;
}

long week_of(long days) {
  // 1970-01-01 is a Thursday; day -3 is the nearest earlier Monday.
  long shifted = days + 3;
  return shifted >= 0 ? shifted / 7 : -((-shifted + 6) / 7);
}

}  // namespace mregress
