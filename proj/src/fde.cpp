#include "mlmatrix/fde.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

#include "mlmatrix/errors.hpp"

namespace mlmatrix {

namespace {

int worker_count() {
  if (const char* env = std::getenv("MLMATRIX_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return std::min(w, 64);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
}

ComplexVector sample_forcing(const ForcingFn& f, double t, int n, int node_index) {
  ComplexVector v;
  try {
    v = f(t);
  } catch (const std::exception& e) {
    throw Error("forcing evaluation failed at node " + std::to_string(node_index) + ": " +
                e.what());
  }
  if (static_cast<int>(v.size()) != n)
    throw InvalidInput("forcing returned a vector of wrong length at node " +
                       std::to_string(node_index));
  return v;
}

// Convolution weights for one lag l on a uniform grid: the exact
// integrals of the singular matrix weight against the two linear hat
// pieces on [t - l h, t - (l-1) h].
struct ConvolutionWeights {
  std::vector<ComplexMatrix> far;  // multiplies f_{i-l}
  std::vector<ComplexMatrix> near; // multiplies f_{i-l+1}
};

ConvolutionWeights convolution_weights(const MlEvaluator& ev, double alpha,
                                       const TimeGrid& grid) {
  const int steps = grid.steps;
  const double h = grid.h();
  const int n = ev.dimension();

  // Exact singular moments at s = l h, l = 0..steps:
  //   Psi0(s) = Int_0^s u^(a-1) E_{a,a}(A u^a) du
  //           = s^a E_{a,a+1}(A s^a),
  //   Psi1(s) = Int_0^s u^(a-1) E_{a,a}(A u^a) u du
  //           = s^(a+1) (E_{a,a+1}(A s^a) - E_{a,a+2}(A s^a)).
  // Evaluations are independent across lags.
  std::vector<ComplexMatrix> psi0(steps + 1), psi1(steps + 1);
  psi0[0] = ComplexMatrix(n, n);
  psi1[0] = ComplexMatrix(n, n);

  const int workers = std::min(worker_count(), steps);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto task = [&](int first, int stride) {
    try {
      for (int l = first; l <= steps; l += stride) {
        const double s = l * h;
        const Complex sa = std::pow(s, alpha);
        const ComplexMatrix e1 = ev.evaluate(alpha, Complex(alpha + 1.0), sa).value;
        const ComplexMatrix e2 = ev.evaluate(alpha, Complex(alpha + 2.0), sa).value;
        psi0[l] = sa * e1;
        psi1[l] = (sa * Complex(s)) * (e1 - e2);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (workers <= 1) {
    task(1, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(task, w + 1, workers);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ConvolutionWeights w;
  w.far.resize(steps + 1, ComplexMatrix(n, n));
  w.near.resize(steps + 1, ComplexMatrix(n, n));
  for (int l = 1; l <= steps; ++l) {
    const double a = (l - 1) * h;
    const double b = l * h;
    ComplexMatrix d0 = psi0[l] - psi0[l - 1];
    ComplexMatrix d1 = psi1[l] - psi1[l - 1];
    // far weight: Int u^(a-1) E(.) (u - a)/h du, near: (b - u)/h.
    ComplexMatrix far = d1;
    far += Complex(-a) * d0;
    ComplexMatrix near = Complex(b) * d0;
    near -= d1;
    w.far[l] = Complex(1.0 / h) * far;
    w.near[l] = Complex(1.0 / h) * near;
  }
  return w;
}

std::vector<ComplexVector> convolve_with(const MlEvaluator& ev, double alpha,
                                         const ForcingFn& f, const TimeGrid& grid) {
  const int n = ev.dimension();
  const int steps = grid.steps;
  std::vector<ComplexVector> out(steps + 1, ComplexVector(n, Complex(0.0)));
  if (!f) return out;

  std::vector<ComplexVector> samples(steps + 1);
  for (int j = 0; j <= steps; ++j) samples[j] = sample_forcing(f, grid.t(j), n, j);

  const ConvolutionWeights w = convolution_weights(ev, alpha, grid);
  for (int i = 1; i <= steps; ++i) {
    ComplexVector acc(n, Complex(0.0));
    for (int l = 1; l <= i; ++l) {
      const ComplexVector a = w.far[l] * samples[i - l];
      const ComplexVector b = w.near[l] * samples[i - l + 1];
      for (int k = 0; k < n; ++k) acc[k] += a[k] + b[k];
    }
    out[i] = std::move(acc);
  }
  return out;
}

Trajectory solve_impl(const FdeProblem& p, const TimeGrid& grid, const EvalConfig& cfg,
                      bool riemann_liouville) {
  p.validate();
  const int n = p.A.rows();
  MlEvaluator ev(p.A, cfg);

  Trajectory traj{grid, {}, {}, {}, false, ev.decomposition().ill_conditioned};
  traj.homogeneous_part.assign(grid.nodes(), ComplexVector(n, Complex(0.0)));
  traj.forced_part = convolve_with(ev, p.alpha, p.forcing, grid);
  traj.values.assign(grid.nodes(), ComplexVector(n, Complex(0.0)));

  const Complex beta = riemann_liouville ? Complex(p.alpha) : Complex(1.0);
  for (int i = 0; i <= grid.steps; ++i) {
    const double t = grid.t(i);
    if (i == 0 && riemann_liouville && p.alpha < 1.0) {
      traj.origin_singular = true;
      continue; // t^(alpha-1) pole; node stays a tagged marker
    }
    const Complex scale = std::pow(t, p.alpha);
    ComplexVector hom = ev.evaluate(p.alpha, beta, scale).value * p.z0;
    if (riemann_liouville) {
      const double prefactor = std::pow(t, p.alpha - 1.0);
      for (Complex& v : hom) v *= prefactor;
    }
    traj.homogeneous_part[i] = std::move(hom);
    for (int k = 0; k < n; ++k)
      traj.values[i][k] = traj.homogeneous_part[i][k] + traj.forced_part[i][k];
  }
  return traj;
}

} // namespace

void FdeProblem::validate() const {
  if (!A.is_square()) throw InvalidInput("FdeProblem: A must be square");
  if (!A.all_finite()) throw InvalidInput("FdeProblem: A must have finite entries");
  if (!(alpha > 0.0) || !(alpha <= 1.0))
    throw InvalidInput("FdeProblem: alpha must lie in (0, 1]");
  if (static_cast<int>(z0.size()) != A.rows())
    throw InvalidInput("FdeProblem: z0 length must match the system dimension");
}

TimeGrid::TimeGrid(double t_end_, int steps_) : t_end(t_end_), steps(steps_) {
  if (!(t_end > 0.0)) throw InvalidInput("TimeGrid: t_end must be > 0");
  if (steps < 1) throw InvalidInput("TimeGrid: steps must be >= 1");
}

Trajectory solve_caputo(const FdeProblem& p, const TimeGrid& grid, const EvalConfig& cfg) {
  if (p.kind != DerivativeKind::Caputo)
    throw InvalidInput("solve_caputo: problem kind must be Caputo");
  return solve_impl(p, grid, cfg, false);
}

Trajectory solve_rl(const FdeProblem& p, const TimeGrid& grid, const EvalConfig& cfg) {
  if (p.kind != DerivativeKind::RiemannLiouville)
    throw InvalidInput("solve_rl: problem kind must be Riemann-Liouville");
  return solve_impl(p, grid, cfg, true);
}

std::vector<ComplexVector> convolve_forcing(const ComplexMatrix& A, double alpha,
                                            const ForcingFn& f, const TimeGrid& grid,
                                            const EvalConfig& cfg) {
  if (!(alpha > 0.0) || !(alpha <= 1.0))
    throw InvalidInput("convolve_forcing: alpha must lie in (0, 1]");
  MlEvaluator ev(A, cfg);
  return convolve_with(ev, alpha, f, grid);
}

} // namespace mlmatrix
