// mlmatrix -- evaluate matrix Mittag-Leffler functions, solve linear
// fractional systems in closed form, and run the built-in analytic
// verification for the Bagley-Torvik companion matrix.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mlmatrix/bagley_torvik.hpp"
#include "mlmatrix/errors.hpp"
#include "mlmatrix/fde.hpp"
#include "mlmatrix/matrix_io.hpp"
#include "mlmatrix/matrix_ml.hpp"
#include "mlmatrix/mittag_leffler.hpp"

namespace {

using namespace mlmatrix;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitDomain = 4;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void print_matrix(const ComplexMatrix& m, std::ostream& out) {
  out << std::setprecision(17);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      const Complex z = m(i, j);
      if (j) out << '\t';
      if (z.imag() == 0.0)
        out << z.real();
      else
        out << '(' << z.real() << ',' << z.imag() << ')';
    }
    out << '\n';
  }
}

void report_warnings(const MatrixFunctionResult& r) {
  if (r.transform_ill_conditioned)
    std::cout << "warning: ill-conditioned Jordan transform (condition estimate "
              << std::setprecision(3) << r.condition_estimate << ")\n";
  if (r.realification_violated)
    std::cout << "warning: real input produced non-negligible imaginary part ("
              << std::setprecision(3) << r.imag_residual << ")\n";
}

int cmd_eval(const std::string& matrix_path, double alpha, double beta,
             std::optional<double> rho, double accuracy, const std::string& out_path,
             const std::string& reference_path) {
  Timer timer;
  const ComplexMatrix A = load_matrix(matrix_path);
  EvalConfig cfg;
  cfg.target_accuracy = accuracy;

  std::cout << "eval: " << A.rows() << "x" << A.cols() << " matrix from " << matrix_path
            << ", alpha=" << alpha << ", beta=" << beta;
  if (rho) std::cout << ", rho=" << *rho;
  std::cout << "\n";

  ComplexMatrix result;
  if (rho) {
    if (A.rows() != 1 || A.cols() != 1)
      throw InvalidInput("--rho is supported only for 1x1 matrices (scalar Prabhakar)");
    result = ComplexMatrix(1, 1, {ml_scalar(A(0, 0), MLParams{alpha, beta, *rho}, cfg)});
  } else {
    const MatrixFunctionResult r = ml_matrix(A, alpha, Complex(beta), cfg);
    report_warnings(r);
    result = r.value;
  }

  print_matrix(result, std::cout);
  if (!out_path.empty()) {
    save_matrix(result, out_path);
    std::cout << "wrote " << out_path << "\n";
  }
  if (!reference_path.empty()) {
    const ComplexMatrix ref = load_matrix(reference_path);
    if (ref.rows() != result.rows() || ref.cols() != result.cols())
      throw InvalidInput("reference matrix shape mismatch");
    double dev = 0.0;
    for (std::size_t k = 0; k < ref.data().size(); ++k)
      dev = std::max(dev, std::abs(result.data()[k] - ref.data()[k]));
    std::cout << "max entrywise deviation from reference: " << std::setprecision(3) << dev
              << "\n";
  }
  std::cout << "elapsed: " << std::setprecision(4) << timer.ms() << " ms\n";
  return 0;
}

int cmd_solve(const std::string& matrix_path, double alpha, const std::string& kind,
              const std::string& z0_arg, double t_end, int steps,
              const std::string& forcing_path, double accuracy, const std::string& out_path) {
  Timer timer;
  FdeProblem p;
  p.A = load_matrix(matrix_path);
  p.alpha = alpha;
  p.kind = kind == "rl" ? DerivativeKind::RiemannLiouville : DerivativeKind::Caputo;
  p.z0 = parse_vector_arg(z0_arg);
  if (!forcing_path.empty()) {
    const SampledForcing f = load_forcing(forcing_path);
    if (f.dimension() != p.A.rows())
      throw InvalidInput("forcing table column count must match the system dimension");
    p.forcing = f.interpolant();
  }
  EvalConfig cfg;
  cfg.target_accuracy = accuracy;
  const TimeGrid grid(t_end, steps);

  std::cout << "solve: " << (kind == "rl" ? "Riemann-Liouville" : "Caputo") << " system of size "
            << p.A.rows() << ", alpha=" << alpha << ", t_end=" << t_end << ", steps=" << steps
            << "\n";

  const Trajectory traj =
      p.kind == DerivativeKind::Caputo ? solve_caputo(p, grid, cfg) : solve_rl(p, grid, cfg);
  if (traj.transform_ill_conditioned)
    std::cout << "warning: ill-conditioned Jordan transform\n";
  if (traj.origin_singular)
    std::cout << "note: t=0 is singular for Riemann-Liouville with alpha < 1; row marked\n";

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw InvalidInput("cannot write trajectory file: " + out_path);
    write_trajectory(traj, out);
    std::cout << "wrote " << out_path << "\n";
  } else {
    write_trajectory(traj, std::cout);
  }
  std::cout << "elapsed: " << std::setprecision(4) << timer.ms() << " ms\n";
  return 0;
}

int cmd_bagley_torvik(double a, double b, double c, double y0, double yp0, double t_end,
                      int steps, const std::string& forcing_path, bool full_state,
                      double accuracy, const std::string& out_path) {
  Timer timer;
  BagleyTorvikSpec spec;
  spec.a = a;
  spec.b = b;
  spec.c = c;
  spec.y0 = y0;
  spec.yp0 = yp0;
  std::optional<SampledForcing> table;
  if (!forcing_path.empty()) {
    table = load_forcing(forcing_path);
    if (table->dimension() != 1)
      throw InvalidInput("bagley-torvik forcing table must have a single value column");
    const ForcingFn f = table->interpolant();
    spec.forcing = [f](double t) { return f(t)[0].real(); };
  }
  EvalConfig cfg;
  cfg.target_accuracy = accuracy;
  const TimeGrid grid(t_end, steps);

  std::cout << "bagley-torvik: a=" << a << ", b=" << b << ", c=" << c << ", y0=" << y0
            << ", y'0=" << yp0 << ", t_end=" << t_end << ", steps=" << steps << "\n";

  Trajectory traj = bagley_torvik_solve(spec, grid, cfg);
  if (traj.transform_ill_conditioned)
    std::cout << "warning: ill-conditioned Jordan transform\n";
  if (!full_state) {
    // Keep only y = z1.
    for (int i = 0; i < grid.nodes(); ++i) {
      traj.values[i].resize(1);
      traj.homogeneous_part[i].resize(1);
      traj.forced_part[i].resize(1);
    }
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw InvalidInput("cannot write trajectory file: " + out_path);
    write_trajectory(traj, out);
    std::cout << "wrote " << out_path << "\n";
  } else {
    write_trajectory(traj, std::cout);
  }
  std::cout << "elapsed: " << std::setprecision(4) << timer.ms() << " ms\n";
  return 0;
}

int cmd_verify(double tol, double p) {
  Timer timer;
  BagleyTorvikSpec spec;
  spec.a = 1.0;
  spec.b = -p;
  spec.c = 0.0;
  const ComplexMatrix B = bagley_torvik_reduce(spec).B;

  const MatrixFunctionResult e1 = ml_matrix(B, 0.5, Complex(1.0));
  const MatrixFunctionResult e2 = ml_matrix(B, 0.5, Complex(0.5));
  const ComplexMatrix h1 = reference_H1(p);
  const ComplexMatrix h2 = reference_H2(p);

  std::cout << "verify: p = " << p << ", tolerance " << tol << "\n";
  report_warnings(e1);

  int failures = 0;
  double max_dev = 0.0;
  const auto compare = [&](const char* name, const ComplexMatrix& got,
                           const ComplexMatrix& ref) {
    std::cout << name << " entrywise pass matrix:\n";
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const double dev = std::abs(got(i, j) - ref(i, j));
        max_dev = std::max(max_dev, dev);
        const bool ok = dev < tol;
        if (!ok) {
          ++failures;
          std::cout << (j ? "     " : "") << 0;
        } else {
          std::cout << (j ? "     " : "") << 1;
        }
      }
      std::cout << "\n";
    }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const double dev = std::abs(got(i, j) - ref(i, j));
        if (dev >= tol)
          std::cout << "  entry (" << i + 1 << "," << j + 1 << ") deviates by "
                    << std::setprecision(3) << dev << "\n";
      }
  };
  compare("abs(E1-H1) < tol", e1.value, h1);
  compare("abs(E2-H2) < tol", e2.value, h2);

  std::cout << std::setprecision(3) << "max deviation: " << max_dev << "\n";
  std::cout << "elapsed: " << std::setprecision(4) << timer.ms() << " ms\n";
  if (failures > 0) {
    std::cout << failures << " of 32 comparisons failed\n";
    return kExitVerifyFailed;
  }
  std::cout << "all 32 comparisons passed\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix Mittag-Leffler functions and closed-form linear FDE solvers"};
  app.require_subcommand(1);

  // eval
  std::string eval_matrix, eval_out, eval_reference;
  double eval_alpha = 1.0, eval_beta = 1.0, eval_accuracy = 1e-13;
  std::optional<double> eval_rho;
  auto* eval = app.add_subcommand("eval", "Evaluate E_{alpha,beta}(A) from a matrix file");
  eval->add_option("--matrix", eval_matrix, "matrix file (JSON)")->required();
  eval->add_option("--alpha", eval_alpha, "alpha > 0")->required();
  eval->add_option("--beta", eval_beta, "beta (real)")->required();
  eval->add_option("--rho", eval_rho, "Prabhakar rho (1x1 matrices only)");
  eval->add_option("--accuracy", eval_accuracy, "target accuracy (default 1e-13)");
  eval->add_option("--out", eval_out, "write the result in matrix-file format");
  eval->add_option("--reference", eval_reference, "matrix file to diff against");

  // solve
  std::string solve_matrix, solve_kind = "caputo", solve_z0, solve_forcing, solve_out;
  double solve_alpha = 0.5, solve_t_end = 1.0, solve_accuracy = 1e-13;
  int solve_steps = 10;
  auto* solve = app.add_subcommand("solve", "Solve D^alpha z = A z + f on a uniform grid");
  solve->add_option("--matrix", solve_matrix, "system matrix file")->required();
  solve->add_option("--alpha", solve_alpha, "order in (0, 1]")->required();
  solve->add_option("--kind", solve_kind, "derivative kind: rl | caputo")
      ->check(CLI::IsMember({"rl", "caputo"}))
      ->required();
  solve->add_option("--z0", solve_z0, "initial data: inline list or file")->required();
  solve->add_option("--t-end", solve_t_end, "final time")->required();
  solve->add_option("--steps", solve_steps, "grid steps")->required();
  solve->add_option("--forcing", solve_forcing, "sampled forcing table");
  solve->add_option("--accuracy", solve_accuracy, "target accuracy");
  solve->add_option("--out", solve_out, "trajectory output file");

  // bagley-torvik
  double bt_a = 1.0, bt_b = 1.0, bt_c = 0.0, bt_y0 = 0.0, bt_yp0 = 0.0, bt_t_end = 1.0,
         bt_accuracy = 1e-13;
  int bt_steps = 10;
  bool bt_full_state = false;
  std::string bt_forcing, bt_out;
  auto* bt = app.add_subcommand("bagley-torvik",
                                "Solve a y'' + b D^(3/2) y + c y = f via the 1/2-order system");
  bt->add_option("--a", bt_a, "coefficient a (nonzero)")->required();
  bt->add_option("--b", bt_b, "coefficient b")->required();
  bt->add_option("--c", bt_c, "coefficient c")->required();
  bt->add_option("--y0", bt_y0, "y(0)")->required();
  bt->add_option("--yp0", bt_yp0, "y'(0)")->required();
  bt->add_option("--t-end", bt_t_end, "final time")->required();
  bt->add_option("--steps", bt_steps, "grid steps")->required();
  bt->add_option("--forcing", bt_forcing, "sampled forcing table (single column)");
  bt->add_flag("--full-state", bt_full_state, "emit the full companion state");
  bt->add_option("--accuracy", bt_accuracy, "target accuracy");
  bt->add_option("--out", bt_out, "trajectory output file");

  // verify
  double verify_tol = 1e-13, verify_p = -1.0;
  auto* verify = app.add_subcommand(
      "verify", "Check E_{1/2,1}(B) and E_{1/2,1/2}(B) against their closed forms");
  verify->add_option("--tol", verify_tol, "entrywise tolerance (default 1e-13)");
  verify->add_option("--p", verify_p, "companion parameter p = -b/a (default -1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (eval->parsed())
      return cmd_eval(eval_matrix, eval_alpha, eval_beta, eval_rho, eval_accuracy, eval_out,
                      eval_reference);
    if (solve->parsed())
      return cmd_solve(solve_matrix, solve_alpha, solve_kind, solve_z0, solve_t_end,
                       solve_steps, solve_forcing, solve_accuracy, solve_out);
    if (bt->parsed())
      return cmd_bagley_torvik(bt_a, bt_b, bt_c, bt_y0, bt_yp0, bt_t_end, bt_steps, bt_forcing,
                               bt_full_state, bt_accuracy, bt_out);
    if (verify->parsed()) return cmd_verify(verify_tol, verify_p);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SingularReference& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainLimit& e) {
    std::cerr << "error (domain limit): " << e.what() << "\n";
    return kExitDomain;
  } catch (const AccuracyUnreachable& e) {
    std::cerr << "error (accuracy): " << e.what() << "; best effort " << e.best_effort
              << ", achieved error about " << e.achieved_error << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error (numerical): " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
