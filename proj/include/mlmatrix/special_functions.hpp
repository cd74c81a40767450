#pragma once

#include <complex>

namespace mlmatrix {

/// 1/Gamma(z), entire in z. Exactly zero at z = 0, -1, -2, ...
/// Lanczos approximation (g = 7, 9 coefficients) with reflection for
/// Re z < 0.5; ~1e-13 relative accuracy for |z| <= 100 away from the
/// far negative real axis.
std::complex<double> rgamma(std::complex<double> z);

/// Complementary error function for complex argument,
/// erfc(z) = (2/sqrt(pi)) * integral_z^inf exp(-t^2) dt.
/// Power series of erf for the cancellation-safe region, Legendre
/// continued fraction for Gamma(1/2, z^2) on the right, and the
/// reflection erfc(-z) = 2 - erfc(z).
std::complex<double> erfc_cx(std::complex<double> z);

} // namespace mlmatrix
