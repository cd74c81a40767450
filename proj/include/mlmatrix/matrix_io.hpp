#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mlmatrix/complex_matrix.hpp"
#include "mlmatrix/fde.hpp"

namespace mlmatrix {

/// Matrix files are JSON documents with fields rows, cols and a
/// row-major data array; each entry is a real number or a [re, im]
/// pair. Serialization round-trips doubles exactly.
ComplexMatrix read_matrix_json(std::istream& in);
void write_matrix_json(const ComplexMatrix& m, std::ostream& out);
ComplexMatrix load_matrix(const std::string& path);
void save_matrix(const ComplexMatrix& m, const std::string& path);

/// Sampled forcing table: whitespace-separated rows (t, v1 .. vn),
/// strictly increasing t, '#' comment lines allowed. Evaluated by
/// linear interpolation, clamped outside the sampled range.
struct SampledForcing {
  std::vector<double> times;
  std::vector<std::vector<double>> samples;

  int dimension() const;
  ForcingFn interpolant() const;
};

SampledForcing load_forcing(const std::string& path);

/// Trajectory table: one row per node, fields t then the solution
/// components (17 significant digits); the origin row of a singular
/// Riemann-Liouville run is marked instead of printed.
void write_trajectory(const Trajectory& traj, std::ostream& out);

/// Initial-state argument: an inline comma-separated list or a path
/// to a whitespace/newline separated list of numbers.
ComplexVector parse_vector_arg(const std::string& arg);

} // namespace mlmatrix
