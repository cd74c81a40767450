#pragma once

#include <complex>

namespace mlmatrix {

using Complex = std::complex<double>;

/// Parameters of the generalized (Prabhakar) Mittag-Leffler function
/// E^rho_{alpha,beta}(z) = sum_k (rho)_k / Gamma(alpha k + beta) * z^k / k!.
struct MLParams {
  double alpha = 1.0;  // must be > 0
  Complex beta = 1.0;
  Complex rho = 1.0;
};

/// Evaluation contract knobs shared by the scalar and matrix engines.
struct EvalConfig {
  double target_accuracy = 1e-13; // absolute-or-relative
  double series_radius = 1.0;     // series is always trusted inside this disc
  int max_series_terms = 500;
  int contour_nodes = 0;          // 0 = derive from target_accuracy
};

/// Generalized Mittag-Leffler (Prabhakar) function. Power series with
/// term recurrence and compensated summation where a tail bound and a
/// cancellation guard certify the target accuracy; otherwise numerical
/// inversion of the Laplace transform
///   E^rho_{a,b}(z) = 1/(2 pi i) Int e^s s^(a rho - b) (s^a - z)^(-rho) ds
/// on a parabolic contour chosen in a region of analyticity, with
/// residue corrections for poles right of the contour.
Complex ml_scalar(Complex z, const MLParams& p, const EvalConfig& cfg = {});

/// Two-parameter Mittag-Leffler function E_{alpha,beta} (rho = 1).
Complex ml_scalar(Complex z, double alpha, Complex beta, const EvalConfig& cfg = {});

/// m-th derivative of E_{alpha,beta}:
///   (d/dz)^m E_{a,b}(z) = m! E^{m+1}_{a, b + a m}(z).
Complex ml_derivative(Complex z, double alpha, Complex beta, int m,
                      const EvalConfig& cfg = {});

namespace detail {

struct SeriesResult {
  Complex value;
  double error_estimate = 0.0;
  bool certified = false;
};

/// Truncated power series; certified only when both the tail bound and
/// the accumulated-roundoff estimate are below the target.
SeriesResult ml_series(Complex z, const MLParams& p, const EvalConfig& cfg);

/// Parabolic-contour Laplace inversion (with residues as needed).
Complex ml_contour(Complex z, const MLParams& p, const EvalConfig& cfg);

} // namespace detail

} // namespace mlmatrix
