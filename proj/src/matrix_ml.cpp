#include "mlmatrix/matrix_ml.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "mlmatrix/errors.hpp"
#include "mlmatrix/special_functions.hpp"

namespace mlmatrix {

namespace {

// First row of the Toeplitz block for E_{alpha,beta}(c * J_size(lambda)):
// entry j is c^j * E^{j+1}_{alpha, beta + j alpha}(c lambda).
ComplexVector block_first_row(Complex lambda, int size, double alpha, Complex beta,
                              Complex scale, const EvalConfig& cfg) {
  ComplexVector row(size);
  const Complex arg = scale * lambda;
  Complex scale_pow = 1.0;
  for (int j = 0; j < size; ++j) {
    const MLParams p{alpha, beta + alpha * static_cast<double>(j),
                     Complex(static_cast<double>(j + 1))};
    row[j] = scale_pow * ml_scalar(arg, p, cfg);
    scale_pow *= scale;
  }
  return row;
}

ComplexMatrix toeplitz_block(const ComplexVector& first_row) {
  const int size = static_cast<int>(first_row.size());
  ComplexMatrix block(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = i; j < size; ++j) block(i, j) = first_row[j - i];
  return block;
}

} // namespace

ComplexMatrix fill_jordan_block(Complex lambda, int size, double alpha, Complex beta,
                                const EvalConfig& cfg) {
  if (size < 1) throw InvalidInput("fill_jordan_block: size must be >= 1");
  if (!(alpha > 0.0)) throw InvalidInput("fill_jordan_block: alpha must be > 0");
  return toeplitz_block(block_first_row(lambda, size, alpha, beta, Complex(1.0), cfg));
}

MlEvaluator::MlEvaluator(ComplexMatrix A, const EvalConfig& cfg)
    : a_(std::move(A)), cfg_(cfg) {
  if (!a_.is_square()) throw InvalidInput("MlEvaluator: matrix must be square");
  if (!a_.all_finite()) throw InvalidInput("MlEvaluator: matrix entries must be finite");
  real_input_ = a_.is_real();
  jordan_ = jordan_decompose(a_);
}

MatrixFunctionResult MlEvaluator::evaluate(double alpha, Complex beta, Complex scale) const {
  if (!(alpha > 0.0)) throw InvalidInput("ml_matrix: alpha must be > 0");
  const int n = a_.rows();

  MatrixFunctionResult out;
  out.condition_estimate = jordan_.condition_estimate;
  out.transform_ill_conditioned = jordan_.ill_conditioned;

  // E(0) = I / Gamma(beta) exactly, independent of the transform.
  if (scale == Complex(0.0) || n == 0) {
    out.value = ComplexMatrix(n, n);
    const Complex g = rgamma(beta);
    for (int i = 0; i < n; ++i) out.value(i, i) = g;
    out.realified = real_input_ && beta.imag() == 0.0;
    return out;
  }

  for (const JordanBlock& b : jordan_.blocks)
    if (std::abs(scale * b.eigenvalue) > kEigenvalueDomainLimit)
      throw DomainLimit("ml_matrix: eigenvalue magnitude exceeds the certified range 100");

  // One scalar sweep per distinct eigenvalue, reused across its blocks.
  std::map<std::pair<double, double>, ComplexVector> rows;
  for (const JordanBlock& b : jordan_.blocks) {
    auto key = std::make_pair(b.eigenvalue.real(), b.eigenvalue.imag());
    auto it = rows.find(key);
    if (it == rows.end() || static_cast<int>(it->second.size()) < b.size)
      rows[key] = block_first_row(b.eigenvalue, b.size, alpha, beta, scale, cfg_);
  }

  ComplexMatrix F(n, n);
  int off = 0;
  for (const JordanBlock& b : jordan_.blocks) {
    const ComplexVector& row =
        rows[std::make_pair(b.eigenvalue.real(), b.eigenvalue.imag())];
    for (int i = 0; i < b.size; ++i)
      for (int j = i; j < b.size; ++j) F(off + i, off + j) = row[j - i];
    off += b.size;
  }

  ComplexMatrix R = jordan_.transform * F * jordan_.transform_inverse;
  if (!R.all_finite()) throw OverflowError("ml_matrix: result overflowed double precision");

  if (real_input_ && beta.imag() == 0.0 && scale.imag() == 0.0) {
    double im2 = 0.0, re2 = 0.0;
    for (const Complex& v : R.data()) {
      im2 += v.imag() * v.imag();
      re2 += v.real() * v.real();
    }
    out.imag_residual = std::sqrt(im2);
    const double real_norm = std::sqrt(re2);
    if (out.imag_residual <= kRealificationTol * std::max(real_norm, 1e-300)) {
      for (Complex& v : R.data()) v = Complex(v.real(), 0.0);
      out.realified = true;
    } else {
      out.realification_violated = true;
    }
  }
  out.value = std::move(R);
  return out;
}

MatrixFunctionResult ml_matrix(const ComplexMatrix& A, double alpha, Complex beta,
                               const EvalConfig& cfg) {
  return MlEvaluator(A, cfg).evaluate(alpha, beta);
}

SpectrumValues spectrum_values(const JordanDecomposition& jd, double alpha, Complex beta,
                               const EvalConfig& cfg) {
  if (!(alpha > 0.0)) throw InvalidInput("spectrum_values: alpha must be > 0");
  SpectrumValues out;
  for (const JordanBlock& b : jd.blocks) {
    auto it = std::find_if(out.entries.begin(), out.entries.end(), [&](const auto& e) {
      return e.eigenvalue == b.eigenvalue;
    });
    if (it == out.entries.end()) {
      out.entries.push_back({b.eigenvalue, {}});
      it = std::prev(out.entries.end());
    }
    const int want = b.size;
    while (static_cast<int>(it->derivatives.size()) < want) {
      const int m = static_cast<int>(it->derivatives.size());
      it->derivatives.push_back(ml_derivative(b.eigenvalue, alpha, beta, m, cfg));
    }
  }
  return out;
}

ComplexMatrix interpolation_oracle(const ComplexMatrix& A, const SpectrumValues& vals) {
  if (!A.is_square()) throw InvalidInput("interpolation_oracle: matrix must be square");
  const int n = A.rows();

  int degree = 0;
  for (const auto& e : vals.entries) degree += static_cast<int>(e.derivatives.size());
  if (degree > 30)
    throw InvalidInput("interpolation_oracle: total Hermite degree exceeds 30");
  if (degree == 0) return ComplexMatrix(n, n);

  // Repeated-node Newton divided differences; a run of equal nodes
  // takes the scaled derivative f^(j)/j! directly.
  ComplexVector nodes;
  std::vector<const SpectrumValues::PerEigenvalue*> owner;
  for (const auto& e : vals.entries)
    for (std::size_t j = 0; j < e.derivatives.size(); ++j) {
      nodes.push_back(e.eigenvalue);
      owner.push_back(&e);
    }

  std::vector<ComplexVector> dd(degree);
  for (int i = 0; i < degree; ++i) {
    dd[i].resize(degree - i);
    dd[i][0] = owner[i]->derivatives[0];
  }
  double factorial = 1.0;
  for (int j = 1; j < degree; ++j) {
    factorial *= j;
    for (int i = 0; i + j < degree; ++i) {
      if (nodes[i] == nodes[i + j]) {
        dd[i][j] = owner[i]->derivatives[j] / factorial;
      } else {
        dd[i][j] = (dd[i + 1][j - 1] - dd[i][j - 1]) / (nodes[i + j] - nodes[i]);
      }
    }
  }

  // Horner in the matrix argument.
  ComplexMatrix R(n, n);
  for (int i = 0; i < n; ++i) R(i, i) = dd[0][degree - 1];
  for (int j = degree - 2; j >= 0; --j) {
    ComplexMatrix shifted = A;
    for (int i = 0; i < n; ++i) shifted(i, i) -= nodes[j];
    R = R * shifted;
    for (int i = 0; i < n; ++i) R(i, i) += dd[0][j];
  }
  return R;
}

MatrixFunctionResult alpha_exponential(const ComplexMatrix& A, double t, double alpha,
                                       const EvalConfig& cfg) {
  if (!(t > 0.0)) throw InvalidInput("alpha_exponential: t must be > 0");
  if (!(alpha > 0.0)) throw InvalidInput("alpha_exponential: alpha must be > 0");
  MlEvaluator ev(A, cfg);
  MatrixFunctionResult r = ev.evaluate(alpha, Complex(alpha), Complex(std::pow(t, alpha)));
  const double prefactor = std::pow(t, alpha - 1.0);
  r.value *= Complex(prefactor);
  r.imag_residual *= std::abs(prefactor);
  if (!r.value.all_finite())
    throw OverflowError("alpha_exponential: result overflowed double precision");
  return r;
}

} // namespace mlmatrix
