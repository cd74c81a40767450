#include "mlmatrix/bagley_torvik.hpp"

#include <cmath>

#include "mlmatrix/errors.hpp"
#include "mlmatrix/special_functions.hpp"

namespace mlmatrix {

namespace {
constexpr double kSqrtPi = 1.77245385090551602729816748334114518;
}

BagleyTorvikReduction bagley_torvik_reduce(const BagleyTorvikSpec& s) {
  if (s.a == 0.0) throw InvalidInput("bagley_torvik_reduce: coefficient a must be nonzero");
  BagleyTorvikReduction r;
  r.B = ComplexMatrix(4, 4);
  r.B(0, 1) = 1.0;
  r.B(1, 2) = 1.0;
  r.B(2, 3) = 1.0;
  r.B(3, 0) = -s.c / s.a;
  r.B(3, 3) = -s.b / s.a;
  r.C = {0.0, 0.0, 0.0, Complex(1.0 / s.a)};
  r.z0 = {Complex(s.y0), 0.0, Complex(s.yp0), 0.0};
  return r;
}

Trajectory bagley_torvik_solve(const BagleyTorvikSpec& s, const TimeGrid& grid,
                               const EvalConfig& cfg) {
  const BagleyTorvikReduction red = bagley_torvik_reduce(s);
  FdeProblem p;
  p.A = red.B;
  p.alpha = 0.5;
  p.kind = DerivativeKind::Caputo;
  p.z0 = red.z0;
  if (s.forcing) {
    const ComplexVector c = red.C;
    const auto f = s.forcing;
    p.forcing = [c, f](double t) {
      const double ft = f(t);
      ComplexVector v(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) v[i] = c[i] * ft;
      return v;
    };
  }
  return solve_caputo(p, grid, cfg);
}

ComplexMatrix reference_H1(double p) {
  if (p == 0.0) throw SingularReference("reference_H1: undefined at p = 0");
  const double e1 = std::exp(p * p) * erfc_cx(Complex(-p)).real();
  const double q = 2.0 / kSqrtPi;
  ComplexMatrix H(4, 4);
  H(0, 0) = 1.0;
  H(0, 1) = q;
  H(0, 2) = 1.0;
  H(0, 3) = e1 / (p * p * p) - 1.0 / (p * p * p) - q / (p * p) - 1.0 / p;
  H(1, 1) = 1.0;
  H(1, 2) = q;
  H(1, 3) = e1 / (p * p) - 1.0 / (p * p) - q / p;
  H(2, 2) = 1.0;
  H(2, 3) = e1 / p - 1.0 / p;
  H(3, 3) = e1;
  return H;
}

ComplexMatrix reference_H2(double p) {
  if (p == 0.0) throw SingularReference("reference_H2: undefined at p = 0");
  const double e1 = std::exp(p * p) * erfc_cx(Complex(-p)).real();
  const double rp = 1.0 / kSqrtPi;
  ComplexMatrix H(4, 4);
  H(0, 0) = rp;
  H(0, 1) = 1.0;
  H(0, 2) = 2.0 * rp;
  H(0, 3) = e1 / (p * p) - 1.0 / (p * p) - 2.0 * rp / p;
  H(1, 1) = rp;
  H(1, 2) = 1.0;
  H(1, 3) = e1 / p - 1.0 / p;
  H(2, 2) = rp;
  H(2, 3) = e1;
  H(3, 3) = p * e1 + rp;
  return H;
}

} // namespace mlmatrix
