#include "mlmatrix/special_functions.hpp"

#include <cmath>
#include <limits>

namespace mlmatrix {

namespace {

using Cx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSqrtPi = 1.77245385090551602729816748334114518;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lanczos coefficients, g = 7.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

// Gamma(z) for Re z >= 0.5, computed through the exponent to avoid
// intermediate overflow of t^(z-1/2).
Cx lanczos_gamma(Cx z) {
  Cx a = kLanczos[0];
  for (int k = 1; k < 9; ++k) a += kLanczos[k] / (z + static_cast<double>(k - 1));
  const Cx t = z + 6.5;
  const Cx w = (z - 0.5) * std::log(t) - t;
  return std::sqrt(2.0 * kPi) * std::exp(w) * a;
}

// sin(pi*z) with the real part reduced modulo 2 before scaling by pi,
// so accuracy survives near large (negative) integers.
Cx sin_pi(Cx z) {
  const double r = z.real() - 2.0 * std::round(z.real() / 2.0);
  return std::sin(kPi * Cx(r, z.imag()));
}

// erf(z) by its Maclaurin series with compensated summation; safe
// where the cancellation factor exp(2*Re(z)^2) stays near unity.
Cx erf_series(Cx z) {
  const Cx z2 = z * z;
  Cx term = z;
  Cx sum = z;
  for (int k = 1; k < 600; ++k) {
    term *= -z2 / static_cast<double>(k);
    const Cx add = term / static_cast<double>(2 * k + 1);
    sum += add;
    if (std::abs(add) <= 0.25 * kEps * std::abs(sum)) break;
  }
  return (2.0 / kSqrtPi) * sum;
}

// Legendre continued fraction for Gamma(1/2, x), x = z^2, Re z > 0:
// erfc(z) = exp(-z^2) * z / sqrt(pi) * 1/(x + 1/2 - (1*1/2)/(x + 5/2 - ...)).
// Modified Lentz iteration.
Cx erfc_cf(Cx z) {
  const Cx x = z * z;
  const double tiny = 1e-300;
  Cx b = x + 0.5;
  Cx c = 1.0 / tiny;
  Cx d = 1.0 / b;
  Cx f = d;
  for (int k = 1; k < 1000; ++k) {
    const double a = -k * (k - 0.5);
    b += 2.0;
    d = b + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Cx delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x) * z / kSqrtPi * f;
}

} // namespace

std::complex<double> rgamma(std::complex<double> z) {
  // Exact values on the integer lattice where they are special:
  // poles of Gamma give exact zeros, small positive integers exact
  // reciprocal factorials.
  if (z.imag() == 0.0 && z.real() == std::round(z.real())) {
    const double zr = z.real();
    if (zr <= 0.0) return 0.0;
    if (zr < 21.0) {
      double f = 1.0;
      for (int i = 2; i < static_cast<int>(zr); ++i) f *= i;
      return Cx(1.0 / f, 0.0);
    }
  }
  if (z.real() >= 0.5) return 1.0 / lanczos_gamma(z);
  // Reflection: 1/Gamma(z) = sin(pi z) * Gamma(1 - z) / pi.
  return sin_pi(z) * lanczos_gamma(1.0 - z) / kPi;
}

std::complex<double> erfc_cx(std::complex<double> z) {
  if (z.real() < 0.0) return 2.0 - erfc_cx(-z);
  // The series loses log10(e^(2 Re(z)^2)) digits to cancellation, the
  // continued fraction converges on the right half-plane only; split
  // where both are comfortable.
  if (z.real() <= 1.5) return 1.0 - erf_series(z);
  return erfc_cf(z);
}

} // namespace mlmatrix
