#pragma once

#include <string>
#include <vector>

#include "mregress/errors.hpp"

namespace mregress {

// Version stamp emitted as the first line of every file this library writes.
inline constexpr const char* kFileVersion = "# manifold-regress v1";

struct CsvRow {
  int line = 0;  // 1-based line number in the source file
  std::vector<std::string> fields;
};

struct CsvFile {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

// Plain comma-separated files: no quoting, '#' lines and blank lines are
// skipped, first remaining line is the header.  Throws DataError when the
// file cannot be read or has no header.
CsvFile read_csv(const std::string& path);

std::vector<std::string> split_fields(const std::string& line);

// Numeric parse of a whole field (surrounding whitespace ignored, anything
// else rejected); "line" and "what" feed the error message.
double parse_number(const std::string& field, int line, const std::string& what);

// Shortest-round-trip style formatting used for all numeric output (%.17g).
std::string format_double(double v);

// Proleptic Gregorian day count with 1970-01-01 = day 0.
long days_from_civil(int y, int m, int d);
void civil_from_days(long z, int& y, int& m, int& d);

// Strict YYYY-MM-DD; validates that the date exists.  Throws DataError.
long parse_iso_date(const std::string& field, int line);
std::string format_iso_date(long days);

// Index of the Monday-started calendar week containing the given day.
long week_of(long days);

}  // namespace mregress
