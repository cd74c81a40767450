#include <doctest.h>

#include <cmath>

#include "mlmatrix/bagley_torvik.hpp"
#include "mlmatrix/errors.hpp"
#include "mlmatrix/matrix_ml.hpp"
#include "support/oracles.hpp"

using namespace mlmatrix;
using oracles::max_abs_diff;

namespace {
const double kSqrtPi = std::sqrt(3.14159265358979323846264338327950288);
}

TEST_CASE("bagley_torvik_reduce: a = b = 1, c = 0 gives the p = -1 companion matrix") {
  const BagleyTorvikReduction r = bagley_torvik_reduce({1.0, 1.0, 0.0, 0.0, 0.0, {}});
  ComplexMatrix want(4, 4);
  want(0, 1) = 1.0;
  want(1, 2) = 1.0;
  want(2, 3) = 1.0;
  want(3, 3) = -1.0;
  CHECK(max_abs_diff(r.B, want) == 0.0);
  CHECK(r.C == ComplexVector{0.0, 0.0, 0.0, 1.0});
}

TEST_CASE("bagley_torvik_reduce: a = 2, b = 0, c = 2 has last row (-1, 0, 0, 0)") {
  const BagleyTorvikReduction r = bagley_torvik_reduce({2.0, 0.0, 2.0, 0.0, 0.0, {}});
  CHECK(r.B(3, 0) == Complex(-1.0));
  CHECK(r.B(3, 1) == Complex(0.0));
  CHECK(r.B(3, 2) == Complex(0.0));
  CHECK(r.B(3, 3) == Complex(0.0));
  CHECK(r.C[3] == Complex(0.5));
}

TEST_CASE("bagley_torvik_reduce: initial state maps to col(y0, 0, y'0, 0)") {
  const BagleyTorvikReduction r = bagley_torvik_reduce({1.0, 1.0, 0.0, 3.0, 7.0, {}});
  CHECK(r.z0 == ComplexVector{3.0, 0.0, 7.0, 0.0});
}

TEST_CASE("bagley_torvik_reduce: a = 0 is rejected") {
  CHECK_THROWS_AS(bagley_torvik_reduce({0.0, 1.0, 1.0, 0.0, 0.0, {}}), InvalidInput);
}

TEST_CASE("bagley_torvik_solve: unforced state at t = 1 is H1(p) z0") {
  BagleyTorvikSpec spec;
  spec.a = 1.0;
  spec.b = 1.0;
  spec.c = 0.0;
  spec.y0 = 1.0;
  spec.yp0 = 0.0;
  const Trajectory traj = bagley_torvik_solve(spec, TimeGrid(1.0, 4));

  // First column of H1(-1) is (1, 0, 0, 0): y(1) = 1 and the state
  // stays on the first basis vector.
  const ComplexVector& z1 = traj.values[4];
  CHECK(std::abs(z1[0] - 1.0) <= 1e-12);
  for (int k = 1; k < 4; ++k) CHECK(std::abs(z1[k]) <= 1e-12);
}

TEST_CASE("bagley_torvik_solve: general z0 propagates by H1(-1) at t = 1") {
  BagleyTorvikSpec spec;
  spec.a = 2.0;
  spec.b = 2.0; // p = -1
  spec.c = 0.0;
  spec.y0 = 0.8;
  spec.yp0 = -1.3;
  const TimeGrid grid(1.0, 2);
  const Trajectory traj = bagley_torvik_solve(spec, grid);

  const ComplexMatrix H1 = reference_H1(-1.0);
  const ComplexVector z0 = {0.8, 0.0, -1.3, 0.0};
  const ComplexVector want = H1 * z0;
  for (int k = 0; k < 4; ++k) CHECK(std::abs(traj.values[2][k] - want[k]) <= 1e-12);
}

TEST_CASE("bagley_torvik_solve: zero data stays identically zero") {
  BagleyTorvikSpec spec;
  spec.a = 1.0;
  spec.b = 1.0;
  spec.c = 0.0;
  const Trajectory traj = bagley_torvik_solve(spec, TimeGrid(2.0, 8));
  for (const auto& v : traj.values)
    for (const auto& z : v) CHECK(std::abs(z) == 0.0);
}

TEST_CASE("bagley_torvik_solve: c != 0 equals the Caputo solve of the reduced system") {
  BagleyTorvikSpec spec;
  spec.a = 1.0;
  spec.b = 0.0;
  spec.c = 1.0; // classical oscillator chain
  spec.y0 = 1.0;
  spec.yp0 = 0.0;
  const TimeGrid grid(1.0, 6);
  const Trajectory bt = bagley_torvik_solve(spec, grid);

  const BagleyTorvikReduction red = bagley_torvik_reduce(spec);
  FdeProblem p;
  p.A = red.B;
  p.alpha = 0.5;
  p.kind = DerivativeKind::Caputo;
  p.z0 = red.z0;
  const Trajectory direct = solve_caputo(p, grid);
  for (int i = 0; i <= grid.steps; ++i)
    for (int k = 0; k < 4; ++k)
      CHECK(bt.values[i][k] == direct.values[i][k]);
}

TEST_CASE("reference_H1/H2: listing values at p = -1") {
  const double e1 = std::exp(1.0) * std::erfc(1.0);
  const ComplexMatrix H1 = reference_H1(-1.0);
  const ComplexMatrix H2 = reference_H2(-1.0);
  CHECK(std::abs(H1(3, 3) - e1) <= 1e-15);
  CHECK(std::abs(H1(2, 3) - (-e1 + 1.0)) <= 1e-15);
  CHECK(std::abs(H1(1, 3) - (e1 + 2.0 / kSqrtPi - 1.0)) <= 1e-14);
  CHECK(std::abs(H1(0, 3) - (-e1 - 2.0 / kSqrtPi + 2.0)) <= 1e-14);
  CHECK(std::abs(H2(3, 3) - (-e1 + 1.0 / kSqrtPi)) <= 1e-15);
  CHECK(std::abs(H2(0, 3) - (e1 - 1.0 + 2.0 / kSqrtPi)) <= 1e-14);
  CHECK(std::abs(H2(1, 3) - (-e1 + 1.0)) <= 1e-15);
  CHECK(std::abs(H2(2, 3) - e1) <= 1e-15);
}

TEST_CASE("reference_H1/H2: parameter-independent entries") {
  for (double p : {-1.0, -0.5, -2.0, 3.0}) {
    const ComplexMatrix H1 = reference_H1(p);
    const ComplexMatrix H2 = reference_H2(p);
    CHECK(H1(0, 0) == Complex(1.0));
    CHECK(std::abs(H1(1, 2) - 2.0 / kSqrtPi) <= 1e-16);
    CHECK(std::abs(H2(0, 0) - 1.0 / kSqrtPi) <= 1e-16);
    CHECK(H1(1, 0) == Complex(0.0));
    CHECK(H2(3, 2) == Complex(0.0));
  }
}

TEST_CASE("reference_H1/H2: p = 0 is singular") {
  CHECK_THROWS_AS(reference_H1(0.0), SingularReference);
  CHECK_THROWS_AS(reference_H2(0.0), SingularReference);
}

TEST_CASE("reference identity: ml_matrix(B(p)) matches H1/H2 for p in {-1, -0.5, -2}") {
  for (double p : {-1.0, -0.5, -2.0}) {
    BagleyTorvikSpec spec;
    spec.a = 1.0;
    spec.b = -p;
    spec.c = 0.0;
    const ComplexMatrix B = bagley_torvik_reduce(spec).B;
    const double dev1 = max_abs_diff(ml_matrix(B, 0.5, Complex(1.0)).value, reference_H1(p));
    const double dev2 = max_abs_diff(ml_matrix(B, 0.5, Complex(0.5)).value, reference_H2(p));
    CHECK(dev1 <= 1e-12);
    CHECK(dev2 <= 1e-12);
  }
}
