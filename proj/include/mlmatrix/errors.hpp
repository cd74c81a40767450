#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace mlmatrix {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: non-square matrix, bad parameter range, a = 0, ...
struct InvalidInput : Error {
  using Error::Error;
};

/// QR iteration exceeded its sweep budget for some eigenvalue.
struct NonConvergence : Error {
  using Error::Error;
};

/// A pivot fell below the numerical-singularity threshold.
struct SingularMatrix : Error {
  using Error::Error;
};

/// The rank sequence of (A - lambda*I)^k admits no consistent Jordan
/// block partition for the clustered multiplicity.
struct DefectiveStructureUndetermined : Error {
  using Error::Error;
};

/// Requested accuracy could not be certified; carries the best value
/// obtained and an estimate of the error actually achieved.
struct AccuracyUnreachable : Error {
  std::complex<double> best_effort;
  double achieved_error;

  AccuracyUnreachable(const std::string& what, std::complex<double> value,
                      double achieved)
      : Error(what), best_effort(value), achieved_error(achieved) {}
};

/// Input is outside the certified evaluation domain (e.g. eigenvalue
/// magnitude beyond the scalar engine's range).
struct DomainLimit : Error {
  using Error::Error;
};

/// A computed quantity left the range of double precision.
struct OverflowError : Error {
  using Error::Error;
};

/// Reference matrices H1/H2 are undefined at p = 0.
struct SingularReference : Error {
  using Error::Error;
};

} // namespace mlmatrix
