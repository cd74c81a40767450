#include "mlmatrix/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mlmatrix/errors.hpp"

namespace mlmatrix {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Unitary Givens pair (c real, s complex) with
//   [ c       conj(s) ] [x]   [r]
//   [ -s      c       ] [y] = [0].
struct Givens {
  double c;
  Complex s;
};

Givens make_givens(Complex x, Complex y) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ay == 0.0) return {1.0, Complex(0.0)};
  if (ax == 0.0) return {0.0, y / ay};
  const double r = std::hypot(ax, ay);
  return {ax / r, (y * std::conj(x) / ax) / r};
}

void apply_givens_left(ComplexMatrix& H, const Givens& g, int i, int j0, int j1) {
  for (int j = j0; j <= j1; ++j) {
    const Complex hi = H(i, j);
    const Complex hk = H(i + 1, j);
    H(i, j) = g.c * hi + std::conj(g.s) * hk;
    H(i + 1, j) = -g.s * hi + g.c * hk;
  }
}

void apply_givens_right(ComplexMatrix& H, const Givens& g, int i, int r0, int r1) {
  for (int r = r0; r <= r1; ++r) {
    const Complex hi = H(r, i);
    const Complex hk = H(r, i + 1);
    H(r, i) = g.c * hi + g.s * hk;
    H(r, i + 1) = -std::conj(g.s) * hi + g.c * hk;
  }
}

// Parlett-Reinsch diagonal balancing with radix-2 scaling (exact in
// floating point). Eigenvalues are invariant under D^-1 A D.
void balance(ComplexMatrix& A) {
  const int n = A.rows();
  bool converged = false;
  int passes = 0;
  while (!converged && passes++ < 20) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c >= r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if (c + r < 0.95 * s) {
        converged = false;
        for (int j = 0; j < n; ++j) A(i, j) /= f;
        for (int j = 0; j < n; ++j) A(j, i) *= f;
      }
    }
  }
}

// Eigenvalues of the trailing 2x2 block; returns the root closer to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex tr2 = (a + d) / 2.0;
  const Complex det = a * d - b * c;
  const Complex disc = std::sqrt(tr2 * tr2 - det);
  const Complex l1 = tr2 + disc;
  const Complex l2 = tr2 - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

void eig2x2(Complex a, Complex b, Complex c, Complex d, Complex& l1, Complex& l2) {
  const Complex tr2 = (a + d) / 2.0;
  const Complex det = a * d - b * c;
  const Complex disc = std::sqrt(tr2 * tr2 - det);
  l1 = tr2 + disc;
  l2 = tr2 - disc;
  // Larger root first via the stable product form when possible.
  if (std::abs(l1) > std::abs(l2) && std::abs(l1) > 0.0) l2 = det / l1;
}

// One implicit single-shift QR sweep on the active Hessenberg block
// [lo, hi], bulge chased by Givens similarity transforms.
void qr_sweep(ComplexMatrix& H, int lo, int hi, Complex shift) {
  const int n = H.rows();
  Complex x = H(lo, lo) - shift;
  Complex y = H(lo + 1, lo);
  for (int k = lo; k < hi; ++k) {
    const Givens g = make_givens(x, y);
    apply_givens_left(H, g, k, std::max(lo, k - 1), n - 1);
    apply_givens_right(H, g, k, 0, std::min(k + 2, hi));
    if (k + 1 < hi) {
      x = H(k + 1, k);
      y = H(k + 2, k);
    }
  }
}

struct JacobiSvd {
  std::vector<double> sigma; // descending
  ComplexMatrix V;           // right singular vectors, columns match sigma
};

// One-sided Jacobi on the columns of A: A V = U Sigma at convergence.
JacobiSvd jacobi_svd(const ComplexMatrix& A) {
  const int m = A.rows();
  const int n = A.cols();
  ComplexMatrix W = A;
  ComplexMatrix V = ComplexMatrix::identity(n);

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double a = 0.0, b = 0.0;
        Complex cpq = 0.0;
        for (int i = 0; i < m; ++i) {
          a += std::norm(W(i, p));
          b += std::norm(W(i, q));
          cpq += std::conj(W(i, p)) * W(i, q);
        }
        const double ac = std::abs(cpq);
        if (ac <= 1e-15 * std::sqrt(a * b) || ac == 0.0) continue;
        rotated = true;
        const Complex phase = cpq / ac;
        const double tau = (b - a) / (2.0 * ac);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        const Complex sp = sn * std::conj(phase);
        const Complex sq = sn * phase;
        for (int i = 0; i < m; ++i) {
          const Complex wp = W(i, p);
          const Complex wq = W(i, q);
          W(i, p) = cs * wp - sp * wq;
          W(i, q) = sq * wp + cs * wq;
        }
        for (int i = 0; i < n; ++i) {
          const Complex vp = V(i, p);
          const Complex vq = V(i, q);
          V(i, p) = cs * vp - sp * vq;
          V(i, q) = sq * vp + cs * vq;
        }
      }
    }
    if (!rotated) break;
  }

  JacobiSvd out;
  out.sigma.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> norms(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += std::norm(W(i, j));
    norms[j] = std::sqrt(s);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return norms[i] > norms[j]; });
  out.V = ComplexMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.sigma[j] = norms[order[j]];
    for (int i = 0; i < n; ++i) out.V(i, j) = V(i, order[j]);
  }
  return out;
}

} // namespace

std::pair<ComplexMatrix, ComplexMatrix> hessenberg_reduce(const ComplexMatrix& A) {
  if (!A.is_square()) throw InvalidInput("hessenberg_reduce: matrix must be square");
  const int n = A.rows();
  ComplexMatrix H = A;
  ComplexMatrix Q = ComplexMatrix::identity(n);

  for (int k = 0; k < n - 2; ++k) {
    double below = 0.0;
    for (int i = k + 2; i < n; ++i) below += std::norm(H(i, k));
    if (below == 0.0) continue;

    // Householder vector for the column below the diagonal.
    ComplexVector v(static_cast<std::size_t>(n - k - 1));
    for (int i = k + 1; i < n; ++i) v[i - k - 1] = H(i, k);
    const double xnorm = norm2(v);
    Complex alpha = -xnorm;
    if (std::abs(v[0]) > 0.0) alpha *= v[0] / std::abs(v[0]);
    v[0] -= alpha;
    const double vnorm2 = [&] {
      double s = 0.0;
      for (const Complex& z : v) s += std::norm(z);
      return s;
    }();
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    // H <- P H, rows k+1..n-1.
    for (int j = k; j < n; ++j) {
      Complex dotv = 0.0;
      for (int i = k + 1; i < n; ++i) dotv += std::conj(v[i - k - 1]) * H(i, j);
      dotv *= beta;
      for (int i = k + 1; i < n; ++i) H(i, j) -= v[i - k - 1] * dotv;
    }
    // H <- H P, cols k+1..n-1.
    for (int i = 0; i < n; ++i) {
      Complex dotv = 0.0;
      for (int j = k + 1; j < n; ++j) dotv += H(i, j) * v[j - k - 1];
      dotv *= beta;
      for (int j = k + 1; j < n; ++j) H(i, j) -= dotv * std::conj(v[j - k - 1]);
    }
    // Q <- Q P.
    for (int i = 0; i < n; ++i) {
      Complex dotv = 0.0;
      for (int j = k + 1; j < n; ++j) dotv += Q(i, j) * v[j - k - 1];
      dotv *= beta;
      for (int j = k + 1; j < n; ++j) Q(i, j) -= dotv * std::conj(v[j - k - 1]);
    }
    for (int i = k + 2; i < n; ++i) H(i, k) = 0.0;
  }
  return {H, Q};
}

ComplexVector eigenvalues(const ComplexMatrix& A, int max_iter) {
  if (!A.is_square()) throw InvalidInput("eigenvalues: matrix must be square");
  const int n = A.rows();
  if (n == 0) return {};
  if (n == 1) return {A(0, 0)};

  ComplexMatrix B = A;
  balance(B);
  ComplexMatrix H = hessenberg_reduce(B).first;

  ComplexVector eigs;
  eigs.reserve(n);

  const double hnorm = H.frobenius_norm();
  auto negligible = [&](int i) {
    const double bound = kEps * (std::abs(H(i - 1, i - 1)) + std::abs(H(i, i)));
    return std::abs(H(i, i - 1)) <= (bound > 0.0 ? bound : kEps * hnorm);
  };

  int hi = n - 1;
  int iters = 0;
  while (hi >= 0) {
    // Deflate converged trailing eigenvalues.
    if (hi == 0) {
      eigs.push_back(H(0, 0));
      break;
    }
    if (negligible(hi)) {
      eigs.push_back(H(hi, hi));
      --hi;
      iters = 0;
      continue;
    }
    int lo = hi;
    while (lo > 0 && !negligible(lo)) --lo;
    if (lo == hi - 1) {
      Complex l1, l2;
      eig2x2(H(lo, lo), H(lo, hi), H(hi, lo), H(hi, hi), l1, l2);
      eigs.push_back(l1);
      eigs.push_back(l2);
      hi -= 2;
      iters = 0;
      continue;
    }
    if (iters >= max_iter)
      throw NonConvergence("eigenvalues: QR iteration exceeded max_iter sweeps");
    Complex shift = wilkinson_shift(H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1), H(hi, hi));
    if (iters > 0 && iters % 12 == 0) {
      // Exceptional shift to break symmetric stalls.
      shift = Complex(std::abs(H(hi, hi - 1)) + std::abs(H(hi - 1, hi - 2)), 0.0);
    }
    qr_sweep(H, lo, hi, shift);
    ++iters;
  }
  return eigs;
}

std::vector<EigenvalueCluster> cluster_eigenvalues(const ComplexVector& eigs,
                                                   double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw InvalidInput("cluster_eigenvalues: cluster_tol must be > 0");
  const int n = static_cast<int>(eigs.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(eigs[i] - eigs[j]) <= cluster_tol) parent[find(i)] = find(j);

  std::vector<EigenvalueCluster> clusters;
  std::vector<int> root_of(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (root_of[r] < 0) {
      root_of[r] = static_cast<int>(clusters.size());
      clusters.push_back({});
    }
    EigenvalueCluster& c = clusters[root_of[r]];
    c.members.push_back(eigs[i]);
    c.algebraic_multiplicity += 1;
  }
  for (EigenvalueCluster& c : clusters) {
    Complex mean = 0.0;
    for (const Complex& z : c.members) mean += z;
    c.representative = mean / static_cast<double>(c.algebraic_multiplicity);
  }
  std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
    if (a.representative.real() != b.representative.real())
      return a.representative.real() < b.representative.real();
    return a.representative.imag() < b.representative.imag();
  });
  return clusters;
}

LuDecomposition::LuDecomposition(ComplexMatrix A) : lu_(std::move(A)) {
  if (!lu_.is_square()) throw InvalidInput("LU: matrix must be square");
  const int n = lu_.rows();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), 0);
  const double threshold = n * kEps * lu_.frobenius_norm();

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(lu_(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < threshold || best == 0.0)
      throw SingularMatrix("LU: numerically singular pivot at column " + std::to_string(k));
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
      std::swap(perm_[k], perm_[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const Complex f = lu_(i, k) / lu_(k, k);
      lu_(i, k) = f;
      for (int j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

ComplexVector LuDecomposition::solve(const ComplexVector& b) const {
  const int n = lu_.rows();
  if (static_cast<int>(b.size()) != n) throw InvalidInput("LU solve: size mismatch");
  ComplexVector x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
    x[i] /= lu_(i, i);
  }
  return x;
}

ComplexMatrix LuDecomposition::solve(const ComplexMatrix& B) const {
  const int n = lu_.rows();
  if (B.rows() != n) throw InvalidInput("LU solve: size mismatch");
  ComplexMatrix X(n, B.cols());
  ComplexVector col(n);
  for (int j = 0; j < B.cols(); ++j) {
    for (int i = 0; i < n; ++i) col[i] = B(i, j);
    ComplexVector x = solve(col);
    for (int i = 0; i < n; ++i) X(i, j) = x[i];
  }
  return X;
}

ComplexMatrix LuDecomposition::inverse() const {
  return solve(ComplexMatrix::identity(lu_.rows()));
}

ComplexVector solve_linear(const ComplexMatrix& A, const ComplexVector& b) {
  return LuDecomposition(A).solve(b);
}

std::vector<double> singular_values(const ComplexMatrix& A) { return jacobi_svd(A).sigma; }

int rank_with_tol(const ComplexMatrix& A, double rank_tol) {
  if (rank_tol < 0.0) rank_tol = std::max(A.rows(), A.cols()) * kEps;
  const std::vector<double> s = singular_values(A);
  if (s.empty() || s[0] == 0.0) return 0;
  const double threshold = rank_tol * s[0];
  int r = 0;
  for (double v : s)
    if (v > threshold) ++r;
  return r;
}

ComplexMatrix null_space_basis(const ComplexMatrix& A, int rank) {
  const JacobiSvd svd = jacobi_svd(A);
  const int n = A.cols();
  if (rank < 0 || rank > n) throw InvalidInput("null_space_basis: invalid rank");
  ComplexMatrix N(n, n - rank);
  for (int j = rank; j < n; ++j)
    for (int i = 0; i < n; ++i) N(i, j - rank) = svd.V(i, j);
  return N;
}

} // namespace mlmatrix
