#pragma once

#include <vector>

#include "mlmatrix/complex_matrix.hpp"
#include "mlmatrix/linalg.hpp"

namespace mlmatrix {

struct JordanBlock {
  Complex eigenvalue;
  int size = 1;
};

/// A = Z J Z^-1 with J assembled from `blocks` (bidiagonal, ones on
/// the superdiagonal). Chains are normalized so each eigenvector
/// (the chain's first column) has unit 2-norm and a real positive
/// largest component.
struct JordanDecomposition {
  std::vector<JordanBlock> blocks;
  ComplexMatrix transform;         // Z, chain vectors as columns
  ComplexMatrix transform_inverse; // Z^-1
  double condition_estimate = 1.0; // ||Z||_F * ||Z^-1||_F
  bool ill_conditioned = false;    // condition_estimate > 1e8
  double reconstruction_residual = 0.0; // ||Z J Z^-1 - A||_F

  ComplexMatrix assemble_jordan() const;
  int dimension() const;
};

/// Threshold on condition_estimate beyond which the decomposition is
/// flagged (but still returned).
inline constexpr double kIllConditionedThreshold = 1e8;

/// Default single-linkage clustering tolerance for the spectrum of A.
/// Computed eigenvalues of a defective eigenvalue of multiplicity m
/// scatter at O((eps * ||A||* cond)^(1/m)); eps^(1/4) re-merges those
/// clouds for block sizes up to 4 while staying far below unit-scale
/// eigenvalue separation.
double default_cluster_tol(const ComplexMatrix& A);

/// Jordan decomposition with explicit tolerance policy. Block sizes
/// per cluster come from the rank sequence r_k = rank((A - lambda I)^k)
/// (number of blocks of size >= k is r_{k-1} - r_k); the numerical
/// rank of each power is selected by the largest singular-value gap
/// consistent with a valid Jordan partition. Chains satisfy
/// (A - lambda I) v_{j+1} = v_j with v_1 an eigenvector.
///
/// cluster_tol <= 0 selects default_cluster_tol(A).
JordanDecomposition jordan_decompose(const ComplexMatrix& A, double cluster_tol = -1.0);

} // namespace mlmatrix
