#pragma once

#include <functional>

#include "mlmatrix/fde.hpp"

namespace mlmatrix {

/// Bagley-Torvik problem a y'' + b D^(3/2) y + c y = f,
/// y(0) = y0, y'(0) = yp0.
struct BagleyTorvikSpec {
  double a = 1.0; // must be nonzero
  double b = 1.0;
  double c = 0.0;
  double y0 = 0.0;
  double yp0 = 0.0;
  std::function<double(double)> forcing; // may be empty
};

/// Companion reduction to the order-1/2 system D^(1/2) z = B z + C f,
/// z = col(y, D^(1/2) y, y', D^(3/2) y), z(0) = col(y0, 0, yp0, 0).
struct BagleyTorvikReduction {
  ComplexMatrix B; // 4x4, superdiagonal ones, last row (-c/a, 0, 0, -b/a)
  ComplexVector C; // (0, 0, 0, 1/a)
  ComplexVector z0;
};

BagleyTorvikReduction bagley_torvik_reduce(const BagleyTorvikSpec& s);

/// Solves the reduced system as a Caputo problem with alpha = 1/2.
/// y(t) is the first component of the returned trajectory.
Trajectory bagley_torvik_solve(const BagleyTorvikSpec& s, const TimeGrid& grid,
                               const EvalConfig& cfg = {});

/// Closed forms of E_{1/2,1}(B) and E_{1/2,1/2}(B) for the c = 0
/// companion matrix with lower-right entry p = -b/a, built from
/// e^(p^2) erfc(-p) and sqrt(pi). Undefined at p = 0.
ComplexMatrix reference_H1(double p);
ComplexMatrix reference_H2(double p);

} // namespace mlmatrix
