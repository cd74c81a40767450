#pragma once

#include <utility>
#include <vector>

#include "mlmatrix/complex_matrix.hpp"

namespace mlmatrix {

/// One eigenvalue cluster: the representative is the mean of the raw
/// eigenvalues assigned to it, the multiplicity their count.
struct EigenvalueCluster {
  Complex representative;
  int algebraic_multiplicity = 0;
  ComplexVector members;
};

/// Unitary reduction A = Q H Q^H with H upper Hessenberg.
std::pair<ComplexMatrix, ComplexMatrix> hessenberg_reduce(const ComplexMatrix& A);

/// All n eigenvalues of a square complex matrix via Wilkinson-shifted
/// QR iteration on the Hessenberg form (Golub & Van Loan ch. 7).
/// max_iter is the sweep budget per eigenvalue.
ComplexVector eigenvalues(const ComplexMatrix& A, int max_iter = 100);

/// Single-linkage clustering of a spectrum: two eigenvalues share a
/// cluster iff they are connected by a chain of pairwise distances
/// <= cluster_tol. Clusters are sorted by (Re, Im) of representative.
std::vector<EigenvalueCluster> cluster_eigenvalues(const ComplexVector& eigs,
                                                   double cluster_tol);

/// Row-pivoted LU factorization kept for repeated solves.
class LuDecomposition {
public:
  explicit LuDecomposition(ComplexMatrix A);

  ComplexVector solve(const ComplexVector& b) const;
  ComplexMatrix solve(const ComplexMatrix& B) const;
  ComplexMatrix inverse() const;

private:
  ComplexMatrix lu_;
  std::vector<int> perm_;
};

/// Solve A x = b by pivoted LU. Throws SingularMatrix when a pivot
/// falls below n * eps * ||A||_F.
ComplexVector solve_linear(const ComplexMatrix& A, const ComplexVector& b);

/// Singular values in descending order (one-sided Jacobi iteration).
std::vector<double> singular_values(const ComplexMatrix& A);

/// Count of singular values > rank_tol * sigma_max. rank_tol < 0
/// selects the default max(rows, cols) * eps.
int rank_with_tol(const ComplexMatrix& A, double rank_tol = -1.0);

/// Orthonormal basis of the null space at the given numerical rank
/// (columns are the right singular vectors of the smallest n - rank
/// singular values).
ComplexMatrix null_space_basis(const ComplexMatrix& A, int rank);

} // namespace mlmatrix
