#pragma once

#include <stdexcept>
#include <string>

namespace mregress {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated preconditions: bad configs, out-of-range parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Sizes that do not line up (point vs. manifold, covariate vs. query, ...).
class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// The computation itself failed, as opposed to being asked a malformed
// question.  CLI maps these to a distinct exit code.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// All kernel weights vanished at the query point.
class EmptyNeighborhood : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// Projection onto the embedded image is undefined or ambiguous
// (zero vector, eigenvalue ties, rank-deficient frames).
class ProjectionError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// Local polynomial design matrix does not have full column rank.
class RankDeficientDesign : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// Iterative solver hit its iteration cap before meeting its tolerance.
class NonConvergence : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// Antipodal configurations where sphere log maps / descent steps break down.
class AntipodalError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// Malformed external data files (CSV ingestion).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace mregress
