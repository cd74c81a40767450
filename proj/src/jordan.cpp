#include "mlmatrix/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mlmatrix/errors.hpp"

namespace mlmatrix {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Orthogonalize v against an orthonormal set (two Gram-Schmidt passes).
void orthogonalize(ComplexVector& v, const std::vector<ComplexVector>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const ComplexVector& b : basis) {
      const Complex c = dot(b, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
}

// Numerical rank of one power of (A - lambda I), restricted to the
// window of ranks admissible for a Jordan partition, decided by the
// largest gap in the singular value sequence.
int select_rank(const std::vector<double>& sigma, int lower, int upper) {
  const int n = static_cast<int>(sigma.size());
  const double smax = sigma.empty() ? 0.0 : sigma[0];
  const double tiny = smax * 1e-280 + std::numeric_limits<double>::denorm_min();
  int best_r = -1;
  double best_gap = -1.0;
  for (int r = lower; r <= upper; ++r) {
    const double num = (r == 0) ? 1.0 : sigma[r - 1];
    const double den = (r >= n) ? 0.0 : sigma[r];
    const double gap = (num + tiny) / (den + tiny);
    if (gap > best_gap) {
      best_gap = gap;
      best_r = r;
    }
  }
  return best_r;
}

struct Chain {
  std::vector<ComplexVector> vectors; // v_1 (eigenvector) .. v_s (top)
};

// All chains for one eigenvalue cluster, longest first.
std::vector<Chain> cluster_chains(const ComplexMatrix& A, Complex lambda, int mult) {
  const int n = A.rows();
  ComplexMatrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = A(i, j) - (i == j ? lambda : Complex(0.0));

  // Rank sequence of scaled powers of M until it stabilizes at n - mult.
  std::vector<int> ranks = {n}; // r_0
  std::vector<ComplexMatrix> null_bases;
  ComplexMatrix P = ComplexMatrix::identity(n);
  while (ranks.back() > n - mult) {
    const int k = static_cast<int>(ranks.size());
    if (k > mult)
      throw DefectiveStructureUndetermined(
          "jordan_decompose: rank sequence did not stabilize within the cluster multiplicity");
    P = P * M;
    const double pn = P.frobenius_norm();
    if (pn > 0.0) P *= Complex(1.0 / pn);

    const int r_prev = ranks[k - 1];
    int lower = n - mult;
    if (k >= 2) lower = std::max(lower, 2 * ranks[k - 1] - ranks[k - 2]);
    const int upper = r_prev - 1;
    if (lower > upper)
      throw DefectiveStructureUndetermined(
          "jordan_decompose: no admissible rank for power " + std::to_string(k));
    const std::vector<double> sigma = singular_values(P);
    const int r = select_rank(sigma, lower, upper);
    ranks.push_back(r);
    null_bases.push_back(null_space_basis(P, r));
  }
  const int p = static_cast<int>(ranks.size()) - 1; // largest block size

  // blocks_geq[k] = number of blocks of size >= k.
  std::vector<int> blocks_geq(p + 2, 0);
  for (int k = 1; k <= p; ++k) blocks_geq[k] = ranks[k - 1] - ranks[k];

  // Select chain tops level by level, from the longest chains down.
  std::vector<ComplexVector> obstruction;        // orthonormal
  std::vector<std::pair<int, ComplexVector>> tops; // (level, top vector)
  std::vector<ComplexVector> carriers;           // members of longer chains at current level
  for (int k = p; k >= 1; --k) {
    const int want = blocks_geq[k] - blocks_geq[k + 1];
    // Obstruction: null(M^{k-1}) plus carriers from longer chains.
    obstruction.clear();
    if (k >= 2) {
      const ComplexMatrix& Nprev = null_bases[k - 2];
      for (int j = 0; j < Nprev.cols(); ++j) {
        ComplexVector b(n);
        for (int i = 0; i < n; ++i) b[i] = Nprev(i, j);
        obstruction.push_back(std::move(b));
      }
    }
    for (const ComplexVector& c : carriers) {
      ComplexVector b = c;
      orthogonalize(b, obstruction);
      const double nb = norm2(b);
      // A carrier numerically inside the obstruction span means the
      // chain bookkeeping has collapsed.
      if (nb <= 1e-10 * norm2(c))
        throw DefectiveStructureUndetermined(
            "jordan_decompose: degenerate chain carrier at level " + std::to_string(k));
      for (Complex& z : b) z /= nb;
      obstruction.push_back(std::move(b));
    }

    const ComplexMatrix& Nk = null_bases[k - 1];
    for (int pick = 0; pick < want; ++pick) {
      int best_j = -1;
      double best_res = -1.0;
      ComplexVector best_v;
      for (int j = 0; j < Nk.cols(); ++j) {
        ComplexVector v(n);
        for (int i = 0; i < n; ++i) v[i] = Nk(i, j);
        orthogonalize(v, obstruction);
        const double res = norm2(v);
        if (res > best_res) {
          best_res = res;
          best_j = j;
          best_v = std::move(v);
        }
      }
      if (best_j < 0 || best_res < 1e-8)
        throw DefectiveStructureUndetermined(
            "jordan_decompose: chain top selection degenerated at level " + std::to_string(k));
      for (Complex& z : best_v) z /= best_res;
      obstruction.push_back(best_v);
      tops.emplace_back(k, best_v);
      carriers.push_back(std::move(best_v));
    }
    // Step every live chain down one level.
    for (ComplexVector& c : carriers) c = M * c;
  }

  std::vector<Chain> chains;
  for (const auto& [level, top] : tops) {
    Chain chain;
    chain.vectors.resize(level);
    chain.vectors[level - 1] = top;
    for (int j = level - 1; j >= 1; --j) chain.vectors[j - 1] = M * chain.vectors[j];

    // Normalize: unit eigenvector with real positive largest component.
    ComplexVector& v1 = chain.vectors[0];
    const double nv = norm2(v1);
    if (nv == 0.0)
      throw DefectiveStructureUndetermined("jordan_decompose: zero eigenvector in chain");
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v1[i]) > std::abs(v1[imax])) imax = i;
    const Complex scale = std::abs(v1[imax]) / (v1[imax] * nv);
    for (ComplexVector& v : chain.vectors)
      for (Complex& z : v) z *= scale;
    chains.push_back(std::move(chain));
  }
  // Longest chains first (tops were collected that way already;
  // keep it explicit for determinism).
  std::stable_sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) {
    return a.vectors.size() > b.vectors.size();
  });
  return chains;
}

} // namespace

ComplexMatrix JordanDecomposition::assemble_jordan() const {
  const int n = dimension();
  ComplexMatrix J(n, n);
  int off = 0;
  for (const JordanBlock& b : blocks) {
    for (int i = 0; i < b.size; ++i) {
      J(off + i, off + i) = b.eigenvalue;
      if (i + 1 < b.size) J(off + i, off + i + 1) = 1.0;
    }
    off += b.size;
  }
  return J;
}

int JordanDecomposition::dimension() const {
  int n = 0;
  for (const JordanBlock& b : blocks) n += b.size;
  return n;
}

double default_cluster_tol(const ComplexMatrix& A) {
  const int n = A.rows();
  return std::max(n, 10) * std::pow(kEps, 0.25) * std::max(1.0, A.frobenius_norm());
}

JordanDecomposition jordan_decompose(const ComplexMatrix& A, double cluster_tol) {
  if (!A.is_square()) throw InvalidInput("jordan_decompose: matrix must be square");
  const int n = A.rows();
  if (cluster_tol <= 0.0) cluster_tol = default_cluster_tol(A);

  const ComplexVector eigs = eigenvalues(A);
  const std::vector<EigenvalueCluster> clusters = cluster_eigenvalues(eigs, cluster_tol);

  JordanDecomposition jd;
  jd.transform = ComplexMatrix(n, n);
  int col = 0;
  for (const EigenvalueCluster& c : clusters) {
    const std::vector<Chain> chains =
        cluster_chains(A, c.representative, c.algebraic_multiplicity);
    int placed = 0;
    for (const Chain& chain : chains) {
      jd.blocks.push_back({c.representative, static_cast<int>(chain.vectors.size())});
      for (const ComplexVector& v : chain.vectors) {
        for (int i = 0; i < n; ++i) jd.transform(i, col) = v[i];
        ++col;
        ++placed;
      }
    }
    if (placed != c.algebraic_multiplicity)
      throw DefectiveStructureUndetermined(
          "jordan_decompose: block sizes do not sum to the cluster multiplicity");
  }

  try {
    jd.transform_inverse = LuDecomposition(jd.transform).inverse();
  } catch (const SingularMatrix&) {
    throw DefectiveStructureUndetermined("jordan_decompose: transform Z is numerically singular");
  }
  jd.condition_estimate =
      jd.transform.frobenius_norm() * jd.transform_inverse.frobenius_norm();
  jd.ill_conditioned = jd.condition_estimate > kIllConditionedThreshold;

  const ComplexMatrix R = jd.transform * jd.assemble_jordan() * jd.transform_inverse - A;
  jd.reconstruction_residual = R.frobenius_norm();
  if (jd.reconstruction_residual > 1e-6 * std::max(1.0, A.frobenius_norm()))
    throw DefectiveStructureUndetermined(
        "jordan_decompose: reconstruction residual too large; Jordan structure unresolved");
  return jd;
}

} // namespace mlmatrix
