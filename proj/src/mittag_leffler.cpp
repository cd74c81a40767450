#include "mlmatrix/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mlmatrix/errors.hpp"
#include "mlmatrix/special_functions.hpp"

namespace mlmatrix {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Kahan {
  Complex sum = 0.0;
  Complex comp = 0.0;
  void add(Complex x) {
    const Complex y = x - comp;
    const Complex t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

bool is_positive_integer(Complex rho, int& m) {
  const double r = std::round(rho.real());
  if (r >= 1.0 && std::abs(rho - Complex(r, 0.0)) <= 1e-12) {
    m = static_cast<int>(r);
    return true;
  }
  return false;
}

// Singularities of the Laplace transform: every s in the cut plane
// with s^alpha = z. For bookkeeping we include points landing exactly
// on the cut (they can never be residue'd, only enclosed).
std::vector<Complex> transform_poles(Complex z, double alpha) {
  std::vector<Complex> poles;
  if (z == Complex(0.0)) return poles;
  const double r = std::pow(std::abs(z), 1.0 / alpha);
  const double phi = std::arg(z);
  for (int j = -2; j <= 2; ++j) {
    const double theta = (phi + 2.0 * kPi * j) / alpha;
    if (std::abs(theta) <= kPi + 1e-9) {
      const Complex s = r * Complex(std::cos(theta), std::sin(theta));
      bool dup = false;
      for (const Complex& q : poles)
        if (std::abs(q - s) <= 1e-12 * (1.0 + r)) dup = true;
      if (!dup) poles.push_back(s);
    }
  }
  return poles;
}

// Vertex a parabola needs for a pole at s* = x + i y to lie strictly
// inside (left of) the contour: mu > (x + |s*|)/2.
double enclosing_vertex(Complex pole) {
  return std::max(0.0, 0.5 * (pole.real() + std::abs(pole)));
}

struct ContourPlan {
  double mu = 6.0;
  int half_nodes = 40;       // nodes at u = j*h, j = -N..N
  double h = 0.1;
  std::vector<Complex> residue_poles; // right of the contour
  double log_scale = 0.0;    // log of the expected result magnitude (>= 0)
  double mu_floor = 2.0;     // smallest vertex clearing the enclosed poles
  double r_eff = 30.0;       // accuracy exponent driving the truncation window
  bool feasible = false;
};

// Node counts balance discretization, truncation and roundoff; see
// Weideman & Trefethen (2007) for the parabolic-contour error model
// e^{mu(1 -/+ d)^2} e^{-2 pi d N / a}.
ContourPlan plan_contour(Complex z, const MLParams& p, const EvalConfig& cfg) {
  const double tol = std::max(cfg.target_accuracy / 3.0, 5e-16);
  const double r = -std::log(tol) + 2.0;

  const std::vector<Complex> poles = transform_poles(z, p.alpha);
  double log_scale = 0.0;
  for (const Complex& s : poles) log_scale = std::max(log_scale, s.real());

  // The vertex is capped by the roundoff budget: quadrature roundoff
  // grows like eps * e^mu while the result scale is e^log_scale.
  const double mu_cap = std::log(tol / kEps) + log_scale;
  const double mu_free = std::clamp(std::min(0.183 * r + 2.0, 0.95 * mu_cap), 2.0, 700.0);

  int rho_int = 0;
  const bool integer_rho = is_positive_integer(p.rho, rho_int);

  auto finish = [&](double mu, const std::vector<Complex>& enclosed,
                    const std::vector<Complex>& outside) -> ContourPlan {
    ContourPlan plan;
    plan.mu = mu;
    plan.log_scale = log_scale;
    const double r_eff = std::max(r - log_scale, 3.0);
    plan.r_eff = r_eff;
    for (const Complex& s : enclosed)
      plan.mu_floor = std::max(plan.mu_floor, 1.1 * enclosing_vertex(s) + 0.5);
    const double a = std::sqrt(1.0 + r_eff / mu);

    double mu_in = 0.0;
    for (const Complex& s : enclosed) mu_in = std::max(mu_in, enclosing_vertex(s));
    const double d_up = std::min(0.95, mu_in > 0.0 ? 1.0 - std::sqrt(mu_in / mu) : 0.95);

    double d_down = 1.0;
    for (const Complex& s : outside)
      d_down = std::min(d_down, std::sqrt(enclosing_vertex(s) / mu) - 1.0);
    if (d_down < 0.05) return plan; // a pole sits too close to the contour

    // The up-side error carries e^{mu_in} from the shrunk contour
    // passing the innermost enclosed pole.
    const double up_exponent = mu_in > 0.0 ? mu_in : mu * (1.0 - d_up) * (1.0 - d_up);
    const double n_up =
        a * std::max(r - log_scale + up_exponent, 1.0) / (2.0 * kPi * d_up);
    double n_down = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 24; ++i) {
      const double d = d_down * i / 24.0;
      const double nd =
          a * std::max(r - log_scale + mu * (1.0 + d) * (1.0 + d), 1.0) / (2.0 * kPi * d);
      n_down = std::min(n_down, nd);
    }
    int n = static_cast<int>(std::ceil(std::max(n_up, n_down))) + 8;
    if (cfg.contour_nodes > 0) n = cfg.contour_nodes;
    if (n > 100000) return plan;

    plan.half_nodes = n;
    plan.h = a / n;
    plan.residue_poles = outside;
    plan.feasible = true;
    return plan;
  };

  // Plan A: enclose every pole.
  double mu_all = mu_free;
  for (const Complex& s : poles) mu_all = std::max(mu_all, 1.15 * enclosing_vertex(s) + 1.0);
  ContourPlan plan_a;
  if (mu_all < 680.0) plan_a = finish(mu_all, poles, {});

  // Plan B: keep far-right poles outside and add their residues
  // (poles of integer order only; negligible ones are dropped).
  ContourPlan plan_b;
  {
    std::vector<Complex> enclosed, outside;
    double mu = mu_free;
    bool ok = true;
    for (const Complex& s : poles) {
      const double me = enclosing_vertex(s);
      if (me <= 2.0 * mu_free) {
        enclosed.push_back(s);
        mu = std::max(mu, 1.15 * me + 1.0);
      } else {
        outside.push_back(s);
      }
    }
    for (const Complex& s : outside) {
      if (enclosing_vertex(s) < 1.4 * mu) ok = false; // straddling configuration
      const bool negligible = s.real() < log_scale + std::log(tol);
      if (!negligible && !integer_rho) ok = false;    // branch point, no residue exists
      if (!negligible && s.real() > 700.0) ok = false; // residue overflows
    }
    if (ok && !outside.empty()) {
      std::vector<Complex> kept;
      for (const Complex& s : outside)
        if (s.real() >= log_scale + std::log(tol)) kept.push_back(s);
      plan_b = finish(mu, enclosed, kept);
    }
  }

  if (plan_a.feasible && plan_b.feasible)
    return plan_a.half_nodes <= plan_b.half_nodes ? plan_a : plan_b;
  if (plan_a.feasible) return plan_a;
  if (plan_b.feasible) return plan_b;
  return plan_a; // infeasible marker
}

// Pochhammer-style binomial coefficient sequence C(gamma, k).
std::vector<Complex> binomial_series(Complex gamma, int m) {
  std::vector<Complex> c(m + 1);
  c[0] = 1.0;
  for (int k = 1; k <= m; ++k)
    c[k] = c[k - 1] * (gamma - static_cast<double>(k - 1)) / static_cast<double>(k);
  return c;
}

// Residue of e^s s^(alpha rho - beta) (s^alpha - z)^(-rho) at a pole
// s* of integer order rho = m + 1 (s*^alpha = z). Local expansion in
// w = (s - s*)/s*:
//   s^alpha - z = z alpha w phi(w),  phi(0) = 1,
//   Res = s*^(1 + gamma) e^{s*} (z alpha)^(-(m+1)) [w^m] e^{s* w} (1+w)^gamma phi^{-(m+1)}.
Complex pole_residue(Complex pole, Complex z, double alpha, Complex beta, int rho_int) {
  const int m = rho_int - 1;
  const Complex gamma = alpha * static_cast<double>(rho_int) - beta;

  // phi coefficients: phi_i = C(alpha, i+1)/alpha.
  const std::vector<Complex> bin_a = binomial_series(alpha, m + 1);
  std::vector<Complex> phi(m + 1);
  for (int i = 0; i <= m; ++i) phi[i] = bin_a[i + 1] / alpha;

  // psi = phi^p by the J.C.P. Miller recurrence, p = -(m+1).
  const double pw = -(m + 1);
  std::vector<Complex> psi(m + 1);
  psi[0] = 1.0;
  for (int k = 1; k <= m; ++k) {
    Complex acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += ((pw + 1.0) * i - k) * phi[i] * psi[k - i];
    psi[k] = acc / static_cast<double>(k);
  }

  // e^{s* w} and (1+w)^gamma coefficients.
  std::vector<Complex> ew(m + 1), bw = binomial_series(gamma, m);
  ew[0] = 1.0;
  for (int k = 1; k <= m; ++k) ew[k] = ew[k - 1] * pole / static_cast<double>(k);

  Complex coeff = 0.0;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; i + j <= m; ++j) coeff += ew[i] * bw[j] * psi[m - i - j];

  const Complex za = z * alpha;
  return std::pow(pole, Complex(1.0) + gamma) * std::exp(pole) *
         std::pow(za, Complex(-(m + 1.0))) * coeff;
}

struct QuadratureResult {
  Complex value;
  double min_denom = std::numeric_limits<double>::infinity();
};

QuadratureResult contour_quadrature(Complex z, const MLParams& p, const ContourPlan& plan) {
  const int n = plan.half_nodes;
  const double h = plan.h;
  const double mu = plan.mu;
  const Complex expo = p.alpha * p.rho - p.beta;

  int rho_int = 0;
  const bool integer_rho = is_positive_integer(p.rho, rho_int);

  Kahan acc;
  double min_denom = std::numeric_limits<double>::infinity();

  // For non-integer rho, (s^alpha - z)^(-rho) needs the analytic
  // branch right of the contour: track the argument of s^alpha - z
  // continuously outward from the vertex.
  auto node_term = [&](int j, double& arg_prev, bool& first) -> Complex {
    const double u = j * h;
    const Complex iu(1.0, u);
    const Complex s = mu * iu * iu;
    const Complex ds = 2.0 * mu * Complex(0.0, 1.0) * iu;
    const Complex sa = std::pow(s, Complex(p.alpha));
    const Complex w = sa - z;
    min_denom = std::min(min_denom, std::abs(w));
    Complex denom_pow;
    if (integer_rho) {
      Complex winv = 1.0 / w;
      denom_pow = 1.0;
      for (int k = 0; k < rho_int; ++k) denom_pow *= winv;
    } else {
      double a = std::arg(w);
      if (!first) {
        while (a - arg_prev > kPi) a -= 2.0 * kPi;
        while (a - arg_prev < -kPi) a += 2.0 * kPi;
      }
      arg_prev = a;
      first = false;
      const Complex logw(std::log(std::abs(w)), a);
      denom_pow = std::exp(-p.rho * logw);
    }
    return std::exp(s) * std::pow(s, expo) * denom_pow * ds;
  };

  // Center node, then walk outward in both directions so the branch
  // tracking stays anchored at the vertex.
  {
    double arg_prev = 0.0;
    bool first = true;
    acc.add(node_term(0, arg_prev, first));
    double arg_up = arg_prev, arg_dn = arg_prev;
    bool first_up = false, first_dn = false;
    for (int j = 1; j <= n; ++j) {
      acc.add(node_term(j, arg_up, first_up));
      acc.add(node_term(-j, arg_dn, first_dn));
    }
  }

  QuadratureResult out;
  out.value = acc.sum * Complex(h / (2.0 * kPi)) / Complex(0.0, 1.0);
  out.min_denom = min_denom;
  return out;
}

} // namespace

namespace detail {

SeriesResult ml_series(Complex z, const MLParams& p, const EvalConfig& cfg) {
  SeriesResult out;
  const double tol = std::max(cfg.target_accuracy, 1e-15);

  Kahan acc;
  Complex coeff = 1.0; // (rho)_k z^k / k!
  Complex term = rgamma(p.beta);
  acc.add(term);
  double max_term = std::abs(term);
  double prev_mag = max_term;
  int small_streak = 0;
  int k = 1;
  bool tail_ok = false;
  for (; k <= cfg.max_series_terms; ++k) {
    coeff *= z * (p.rho + static_cast<double>(k - 1)) / static_cast<double>(k);
    if (!std::isfinite(coeff.real()) || !std::isfinite(coeff.imag())) {
      out.value = acc.sum;
      return out;
    }
    term = coeff * rgamma(p.alpha * k + p.beta);
    acc.add(term);
    const double mag = std::abs(term);
    max_term = std::max(max_term, mag);
    const double scale = std::max(1.0, std::abs(acc.sum));
    if (mag <= 0.05 * tol * scale && mag <= prev_mag) {
      if (++small_streak >= 3) {
        tail_ok = true;
        break;
      }
    } else {
      small_streak = 0;
    }
    prev_mag = mag;
  }

  out.value = acc.sum;
  const double scale = std::max(1.0, std::abs(acc.sum));
  const double round_err = 4.0 * kEps * max_term + kEps * std::abs(acc.sum);
  out.error_estimate = round_err + (tail_ok ? 0.15 * tol * scale : 1.0);
  out.certified = tail_ok && round_err <= 0.5 * tol * scale &&
                  std::isfinite(acc.sum.real()) && std::isfinite(acc.sum.imag());
  return out;
}

Complex ml_contour(Complex z, const MLParams& p, const EvalConfig& cfg) {
  const double tol = std::max(cfg.target_accuracy, 5e-15);
  ContourPlan plan = plan_contour(z, p, cfg);
  if (!plan.feasible)
    throw AccuracyUnreachable("ml_scalar: no feasible inversion contour for these parameters",
                              Complex(0.0), 1.0);

  Complex residues = 0.0;
  if (!plan.residue_poles.empty()) {
    int rho_int = 0;
    if (!is_positive_integer(p.rho, rho_int))
      throw AccuracyUnreachable(
          "ml_scalar: branch points right of every affordable contour (non-integer rho)",
          Complex(0.0), 1.0);
    for (const Complex& s : plan.residue_poles)
      residues += pole_residue(s, z, p.alpha, p.beta, rho_int);
  }

  // Error control is a posteriori: two discretizations of the same
  // contour must agree. Disagreement (or a brush with the branch
  // structure) pushes the contour out and refines.
  for (int attempt = 0;; ++attempt) {
    const double span = plan.half_nodes * plan.h;
    const QuadratureResult coarse = contour_quadrature(z, p, plan);
    ContourPlan fine = plan;
    fine.half_nodes = plan.half_nodes + plan.half_nodes / 3 + 7;
    fine.h = span / fine.half_nodes;
    const QuadratureResult q = contour_quadrature(z, p, fine);

    const Complex value = q.value + residues;
    const double scale = std::max(1.0, std::abs(value));
    const double diff = std::abs(q.value - coarse.value);
    const double brush = plan.mu > 0.0 ? q.min_denom / std::pow(plan.mu, p.alpha) : 1.0;

    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw OverflowError("ml_scalar: contour evaluation overflowed");
    if (diff <= tol * scale && brush > 1e-6) return value;
    if (attempt >= 3)
      throw AccuracyUnreachable("ml_scalar: requested accuracy not reached on the contour",
                                value, diff / scale);
    if (brush <= 1e-6) {
      // The contour passed too close to a singularity of the
      // transform: push it outward, but never across a pole whose
      // residue is already accounted for.
      double mu_cap = std::numeric_limits<double>::infinity();
      for (const Complex& s : plan.residue_poles)
        mu_cap = std::min(mu_cap, 0.8 * enclosing_vertex(s));
      plan.mu = std::min(std::max(plan.mu * 1.35, plan.mu_floor), mu_cap);
    } else {
      // Discretization/roundoff limited: refine, drifting the vertex
      // down toward the roundoff-friendly floor.
      plan.mu = std::max({plan.mu * 0.82, plan.mu_floor, 2.0});
    }
    plan.half_nodes = static_cast<int>(plan.half_nodes * 1.6) + 8;
    plan.h = std::sqrt(1.0 + plan.r_eff / plan.mu) / plan.half_nodes;
  }
}

} // namespace detail

Complex ml_scalar(Complex z, const MLParams& p, const EvalConfig& cfg) {
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha))
    throw InvalidInput("ml_scalar: alpha must be a positive real number");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !std::isfinite(p.beta.real()) ||
      !std::isfinite(p.beta.imag()) || !std::isfinite(p.rho.real()) ||
      !std::isfinite(p.rho.imag()))
    throw InvalidInput("ml_scalar: non-finite argument");
  if (!(cfg.target_accuracy > 0.0) || cfg.max_series_terms < 1)
    throw InvalidInput("ml_scalar: invalid evaluation config");

  if (z == Complex(0.0)) return rgamma(p.beta);

  // Attempt the series only when the term count it needs is plausibly
  // within budget: terms start decaying near k ~ |z|^(1/alpha)/alpha.
  const double k_est =
      std::pow(std::abs(z), 1.0 / p.alpha) / p.alpha + 2.0 * std::abs(p.rho) + 40.0;
  if (std::abs(z) <= cfg.series_radius || k_est <= 0.9 * cfg.max_series_terms) {
    const detail::SeriesResult sr = detail::ml_series(z, p, cfg);
    if (sr.certified) return sr.value;
    if (std::abs(z) <= cfg.series_radius) {
      // Inside the guaranteed-series disc the tail always certifies;
      // a failure here means the requested accuracy is below the
      // cancellation floor.
      if (sr.error_estimate < 1.0)
        throw AccuracyUnreachable("ml_scalar: series cancellation floor above target accuracy",
                                  sr.value, sr.error_estimate);
    }
  }
  return detail::ml_contour(z, p, cfg);
}

Complex ml_scalar(Complex z, double alpha, Complex beta, const EvalConfig& cfg) {
  return ml_scalar(z, MLParams{alpha, beta, Complex(1.0)}, cfg);
}

Complex ml_derivative(Complex z, double alpha, Complex beta, int m, const EvalConfig& cfg) {
  if (m < 0) throw InvalidInput("ml_derivative: derivative order must be >= 0");
  if (m > 170) throw OverflowError("ml_derivative: m! overflows double precision");
  if (m == 0) return ml_scalar(z, MLParams{alpha, beta, Complex(1.0)}, cfg);
  double factorial = 1.0;
  for (int k = 2; k <= m; ++k) factorial *= k;
  return factorial *
         ml_scalar(z, MLParams{alpha, beta + alpha * static_cast<double>(m),
                               Complex(static_cast<double>(m + 1))},
                   cfg);
}

} // namespace mlmatrix
