#pragma once

#include <vector>

#include "mlmatrix/complex_matrix.hpp"
#include "mlmatrix/jordan.hpp"
#include "mlmatrix/mittag_leffler.hpp"

namespace mlmatrix {

/// Values of a function on the spectrum of a matrix: for each distinct
/// eigenvalue, f and its derivatives up to (largest block size - 1).
struct SpectrumValues {
  struct PerEigenvalue {
    Complex eigenvalue;
    ComplexVector derivatives; // f(l), f'(l), ..., f^(m-1)(l)
  };
  std::vector<PerEigenvalue> entries;
};

/// Matrix function value plus evaluation diagnostics.
struct MatrixFunctionResult {
  ComplexMatrix value;
  double condition_estimate = 1.0;
  bool transform_ill_conditioned = false;
  bool realified = false;              // imaginary residue was dropped
  bool realification_violated = false; // real input, non-negligible Im part
  double imag_residual = 0.0;          // ||Im||_F before realification
};

/// Imaginary residue below this fraction of the real part is treated
/// as eigendecomposition roundoff and zeroed for real inputs.
inline constexpr double kRealificationTol = 1e-8;

/// Eigenvalue magnitude cap mirroring the scalar engine's certified range.
inline constexpr double kEigenvalueDomainLimit = 100.0;

/// Upper-triangular Toeplitz block of E_{alpha,beta} at one Jordan
/// block: diagonal j above the main carries E^{j+1}_{a, b + j a}(lambda).
ComplexMatrix fill_jordan_block(Complex lambda, int size, double alpha, Complex beta,
                                const EvalConfig& cfg = {});

/// Caches the Jordan decomposition of A and evaluates
/// E_{alpha,beta}(c A) for many (alpha, beta, c) at fixed structure.
/// The scaled matrix c A shares A's chains: block entries pick up c^j
/// on the j-th superdiagonal.
class MlEvaluator {
public:
  explicit MlEvaluator(ComplexMatrix A, const EvalConfig& cfg = {});

  MatrixFunctionResult evaluate(double alpha, Complex beta, Complex scale = 1.0) const;
  const JordanDecomposition& decomposition() const { return jordan_; }
  int dimension() const { return a_.rows(); }

private:
  ComplexMatrix a_;
  EvalConfig cfg_;
  JordanDecomposition jordan_;
  bool real_input_ = false;
};

/// E_{alpha,beta}(A) through the Jordan canonical form.
MatrixFunctionResult ml_matrix(const ComplexMatrix& A, double alpha, Complex beta,
                               const EvalConfig& cfg = {});

/// E_{alpha,beta} and its derivatives on the spectrum described by a
/// Jordan decomposition.
SpectrumValues spectrum_values(const JordanDecomposition& jd, double alpha, Complex beta,
                               const EvalConfig& cfg = {});

/// Independent definition of f(A): Hermite interpolation polynomial
/// matching the spectrum values (Newton divided differences with
/// repeated nodes), evaluated at A by Horner's scheme. Refuses total
/// degree above 30, where divided differences degrade.
ComplexMatrix interpolation_oracle(const ComplexMatrix& A, const SpectrumValues& vals);

/// Matrix alpha-exponential e_alpha^{At} = t^(alpha-1) E_{alpha,alpha}(A t^alpha).
MatrixFunctionResult alpha_exponential(const ComplexMatrix& A, double t, double alpha,
                                       const EvalConfig& cfg = {});

} // namespace mlmatrix
