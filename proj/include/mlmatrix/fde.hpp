#pragma once

#include <functional>
#include <vector>

#include "mlmatrix/complex_matrix.hpp"
#include "mlmatrix/matrix_ml.hpp"

namespace mlmatrix {

enum class DerivativeKind { RiemannLiouville, Caputo };

/// Forcing term f(t), vector-valued; an empty function means f = 0.
using ForcingFn = std::function<ComplexVector(double)>;

/// Linear system D^alpha z = A z + f with initial data z0,
/// 0 < alpha <= 1.
struct FdeProblem {
  ComplexMatrix A;
  double alpha = 1.0;
  DerivativeKind kind = DerivativeKind::Caputo;
  ComplexVector z0;
  ForcingFn forcing; // may be empty

  void validate() const;
};

/// Uniform grid t_i = i * h, h = t_end / steps.
struct TimeGrid {
  double t_end = 1.0;
  int steps = 1;

  TimeGrid(double t_end_, int steps_);
  double h() const { return t_end / steps; }
  int nodes() const { return steps + 1; }
  double t(int i) const { return t_end * i / steps; }
};

/// Solution values per node, split into the propagator term and the
/// forcing convolution; values = homogeneous_part + forced_part at
/// every node by construction.
struct Trajectory {
  TimeGrid grid;
  std::vector<ComplexVector> values;
  std::vector<ComplexVector> homogeneous_part;
  std::vector<ComplexVector> forced_part;
  /// Riemann-Liouville solutions with alpha < 1 blow up like
  /// t^(alpha-1) at the origin; node 0 is then a marker, not a value.
  bool origin_singular = false;
  bool transform_ill_conditioned = false;
};

/// Caputo solution z(t) = E_{a,1}(A t^a) z0 + convolution term.
Trajectory solve_caputo(const FdeProblem& p, const TimeGrid& grid,
                        const EvalConfig& cfg = {});

/// Riemann-Liouville solution z(t) = t^(a-1) E_{a,a}(A t^a) z0 +
/// convolution term; node 0 is tagged singular for alpha < 1.
Trajectory solve_rl(const FdeProblem& p, const TimeGrid& grid, const EvalConfig& cfg = {});

/// Convolution integral Int_0^t (t-s)^(a-1) E_{a,a}(A (t-s)^a) f(s) ds
/// at every grid node. Product rule: f is replaced by its piecewise
/// linear interpolant and the weakly singular matrix weight is
/// integrated exactly per subinterval through
///   Int_0^s u^(a-1) E_{a,a}(A u^a) du = s^a E_{a,a+1}(A s^a),
///   Int_0^s u^a E_{a,a}(A u^a) du
///     = s^(a+1) (E_{a,a+1}(A s^a) - E_{a,a+2}(A s^a)).
std::vector<ComplexVector> convolve_forcing(const ComplexMatrix& A, double alpha,
                                            const ForcingFn& f, const TimeGrid& grid,
                                            const EvalConfig& cfg = {});

} // namespace mlmatrix
