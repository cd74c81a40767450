#pragma once

#include <complex>
#include <vector>

namespace mlmatrix {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Dense complex matrix, row-major storage.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols);
  ComplexMatrix(int rows, int cols, ComplexVector data);

  static ComplexMatrix identity(int n);
  static ComplexMatrix zero(int rows, int cols);
  static ComplexMatrix diagonal(const ComplexVector& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Complex& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  const ComplexVector& data() const { return data_; }
  ComplexVector& data() { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;
  /// True when every entry has zero imaginary part.
  bool is_real() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s);

private:
  int rows_ = 0;
  int cols_ = 0;
  ComplexVector data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex s, ComplexMatrix m);
ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v);

double norm2(const ComplexVector& v);
Complex dot(const ComplexVector& x, const ComplexVector& y); // conj(x) . y

} // namespace mlmatrix
