#include "qutrit/harness.hpp"

#include "qutrit/adjoint.hpp"
#include "qutrit/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace qutrit {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  os << std::setprecision(17);
  return os;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

ControlGrid random_admissible(std::mt19937_64& rng, double T, std::size_t N, double u_amp,
                              double n_amp) {
  std::uniform_real_distribution<double> du(-u_amp, u_amp);
  std::uniform_real_distribution<double> dn(0.0, n_amp);
  ControlGrid c = ControlGrid::constant(T, N, 0.0, 0.0, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    c.u[i] = du(rng);
    c.n1[i] = dn(rng);
    c.n2[i] = dn(rng);
  }
  return c;
}

double terminal_objective(const Problem& p, const ControlGrid& c, const IntegratorConfig& cfg) {
  CauchyCounter scratch;
  return eval_objective(p.objective, forward_solve(p.gens, c, p.x0, cfg, scratch).final_state());
}

}  // namespace

void write_history_csv(std::ostream& os, const RunReport& report) {
  os << std::setprecision(17);
  os << "iteration,objective,cauchy_problems\n";
  for (const HistoryRow& r : report.history) {
    os << r.iteration << ',' << r.objective << ',' << r.cauchy_problems << '\n';
  }
}

void write_controls_csv(std::ostream& os, const ControlGrid& c) {
  os << std::setprecision(17);
  os << "t,u,n1,n2\n";
  for (std::size_t i = 0; i < c.cells(); ++i) {
    os << c.grid_time(i) << ',' << c.u[i] << ',' << c.n1[i] << ',' << c.n2[i] << '\n';
  }
}

void write_dynamics_csv(std::ostream& os, const Trajectory& fwd, const Objective& objective,
                        double renyi_alpha) {
  os << std::setprecision(17);
  os << "t,x1,x2,x3,x4,x5,x6,x7,x8,x9,rho11,rho22,rho33,entropy,purity,renyi,hs_distance_sq\n";
  const std::vector<double> times = fwd.times();
  const std::vector<Vec9> states = fwd.states();
  const DensityMatrix target = derealify(objective.x_target);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Vec9& x = states[k];
    const DensityMatrix rho = derealify(x);
    os << times[k];
    for (int j = 0; j < 9; ++j) os << ',' << x[j];
    os << ',' << x[0] << ',' << x[5] << ',' << x[8];
    os << ',' << von_neumann_entropy(rho) << ',' << purity(rho) << ','
       << petz_renyi(rho, target, renyi_alpha).value << ',' << hs_distance_sq(rho, target) << '\n';
  }
}

void write_report(std::ostream& os, const ScenarioConfig& cfg, const RunReport& report) {
  os << std::setprecision(17);
  os << "scenario: " << cfg.name << '\n';
  os << "method: " << to_string(report.method) << '\n';
  os << "objective: " << to_string(cfg.objective) << '\n';
  os << "converged: " << (report.converged ? "true" : "false") << '\n';
  os << "iterations: " << (report.history.empty() ? 0 : report.history.back().iteration) << '\n';
  os << "complexity: " << report.cauchy_problems << '\n';
  os << "initial_objective: " << report.history.front().objective << '\n';
  os << "final_objective: " << report.final_objective() << '\n';
  os << "best_objective: " << report.best_objective << '\n';
  os << "eps_stop: " << cfg.gpm.eps_stop << '\n';
}

OptimizeOutcome cmd_optimize(const ScenarioConfig& cfg, std::ostream& log) {
  const Problem problem = cfg.make_problem();
  ensure_dir(cfg.output_dir);

  OptimizeOutcome out;
  out.report = run(cfg.method, problem, cfg.initial_guess(), cfg.gpm);
  const RunReport& r = out.report;

  const fs::path dir(cfg.output_dir);
  {
    auto os = open_output(dir / "history.csv");
    write_history_csv(os, r);
  }
  {
    auto os = open_output(dir / "controls.csv");
    write_controls_csv(os, r.final_control);
  }
  {
    auto os = open_output(dir / "dynamics.csv");
    write_dynamics_csv(os, r.final_trajectory, problem.objective, cfg.renyi_alpha);
  }
  {
    auto os = open_output(dir / "report.txt");
    write_report(os, cfg, r);
  }
  {
    auto os = open_output(dir / "config.txt");
    os << to_config_text(cfg);
  }

  log << std::setprecision(6);
  log << cfg.name << " " << to_string(r.method) << ": " << (r.converged ? "converged" : "NOT converged")
      << " after " << r.history.back().iteration << " iterations, " << r.cauchy_problems
      << " Cauchy problems, " << to_string(cfg.objective) << " = " << r.final_objective() << '\n';
  out.exit_code = r.converged ? kExitOk : kExitNotConverged;
  return out;
}

int cmd_simulate(const ScenarioConfig& cfg, std::ostream& log) {
  const Problem problem = cfg.make_problem();
  ensure_dir(cfg.output_dir);
  const ControlGrid c = project(cfg.initial_guess(), problem.bounds);
  CauchyCounter counter;
  const Trajectory fwd = forward_solve(problem.gens, c, problem.x0, problem.integrator, counter);
  const fs::path dir(cfg.output_dir);
  {
    auto os = open_output(dir / "dynamics.csv");
    write_dynamics_csv(os, fwd, problem.objective, cfg.renyi_alpha);
  }
  {
    auto os = open_output(dir / "controls.csv");
    write_controls_csv(os, c);
  }
  log << std::setprecision(6) << cfg.name << ": " << to_string(cfg.objective) << " = "
      << eval_objective(problem.objective, fwd.final_state()) << '\n';
  return kExitOk;
}

std::vector<double> default_sweep_betas() {
  std::vector<double> b;
  for (int j = 0; j <= 16; ++j) b.push_back(0.1 + 0.05 * j);
  return b;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  f.points = x.size();
  if (x.size() < 2) {
    f.intercept = y.empty() ? 0.0 : y.front();
    return f;
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

SweepResult cmd_sweep_beta(const ScenarioConfig& cfg, const std::vector<double>& alphas,
                           const std::vector<double>& betas, std::size_t threads, bool write_files,
                           std::ostream& log) {
  const Problem problem = cfg.make_problem();
  const ControlGrid c0 = cfg.initial_guess();

  SweepResult result;
  for (double a : alphas) {
    for (double b : betas) result.points.push_back({a, b, std::nullopt});
  }

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr failure;
  auto sweep_body = [&]() {
    for (std::size_t k = next++; k < result.points.size(); k = next++) {
      SweepPoint& pt = result.points[k];
      GpmConfig g = cfg.gpm;
      g.alpha = pt.alpha;
      g.beta = pt.beta;
      const RunReport r = run(Method::GPM2, problem, c0, g);
      if (r.converged) pt.complexity = r.cauchy_problems;
      if (write_files) {
        // each run owns its directory, so workers never share a file
        std::ostringstream name;
        name << "alpha_" << pt.alpha << "_beta_" << pt.beta;
        const fs::path dir = fs::path(cfg.output_dir) / "sweep_runs" / name.str();
        ensure_dir(dir.string());
        auto os = open_output(dir / "history.csv");
        write_history_csv(os, r);
      }
      std::lock_guard<std::mutex> lock(log_mutex);
      log << "alpha=" << pt.alpha << " beta=" << pt.beta << " complexity="
          << (pt.complexity ? std::to_string(*pt.complexity) : std::string("not converged")) << '\n';
    }
  };
  auto worker = [&]() {
    try {
      sweep_body();
    } catch (...) {
      std::lock_guard<std::mutex> lock(log_mutex);
      if (!failure) failure = std::current_exception();
      next = result.points.size();
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, result.points.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  for (double a : alphas) {
    std::vector<double> xs, ys;
    for (const SweepPoint& p : result.points) {
      if (p.alpha == a && p.complexity) {
        xs.push_back(p.beta);
        ys.push_back(static_cast<double>(*p.complexity));
      }
    }
    result.fits.emplace_back(a, fit_line(xs, ys));
  }

  if (write_files) {
    ensure_dir(cfg.output_dir);
    const fs::path dir(cfg.output_dir);
    {
      auto os = open_output(dir / "sweep.csv");
      os << "alpha,beta,complexity\n";
      for (const SweepPoint& p : result.points) {
        os << p.alpha << ',' << p.beta << ',';
        if (p.complexity) os << *p.complexity;
        os << '\n';
      }
    }
    {
      auto os = open_output(dir / "sweep_fit.txt");
      for (const auto& [a, f] : result.fits) {
        os << "alpha " << a << ": complexity = " << f.slope << " * beta + " << f.intercept << " ("
           << f.points << " points)\n";
      }
    }
  }
  for (const auto& [a, f] : result.fits) {
    log << std::setprecision(6) << "alpha " << a << ": complexity ~ " << f.slope << " * beta + "
        << f.intercept << '\n';
  }
  return result;
}

std::vector<ValidationCheck> cmd_validate(const ValidateOptions& opts, std::ostream& log) {
  std::vector<ValidationCheck> checks;
  std::mt19937_64 rng(opts.seed);

  ScenarioConfig s51 = preset("5.1");
  const SystemParams params = s51.params;
  Generators gens = build_generators(params);
  if (opts.corrupt_generator) gens.A(1, 2) += 0.25;

  IntegratorConfig tight;
  tight.rel_tol = 1e-12;
  tight.abs_tol = 1e-14;

  // Rows 1, 6, 9 of every generator sum to zero column by column.
  {
    double worst = 0.0;
    for (const Mat9* M : {&gens.A, &gens.Bu, &gens.Bn1, &gens.Bn2}) {
      const Eigen::Matrix<double, 1, 9> s = M->row(0) + M->row(5) + M->row(8);
      worst = std::max(worst, s.cwiseAbs().maxCoeff());
    }
    checks.push_back({"generator_trace_preservation", worst <= 1e-12, worst, 1e-12, ""});
  }

  // Closed-form switching polynomials against <y, B x>.
  {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double worst = 0.0;
    const Generators clean = build_generators(params);
    for (int k = 0; k < 10000; ++k) {
      Vec9 x, y;
      for (int j = 0; j < 9; ++j) {
        x[j] = d(rng);
        y[j] = d(rng);
      }
      const SwitchingValues a = switching_values(x, y, params);
      const SwitchingValues b = switching_values(x, y, clean);
      worst = std::max({worst, std::abs(a.ku - b.ku), std::abs(a.kn1 - b.kn1), std::abs(a.kn2 - b.kn2)});
    }
    checks.push_back({"switching_polynomial_vs_bilinear", worst <= 1e-12, worst, 1e-12, ""});
  }

  // Realified model against the complex master equation, plus physical invariants.
  {
    const DensityMatrix rho0 = s51.rho0;
    const Vec9 x0 = realify(rho0);
    double worst = 0.0;
    double trace_drift = 0.0;
    double min_eig = 1.0;
    CauchyCounter counter;
    for (int k = 0; k < 5; ++k) {
      const ControlGrid c = random_admissible(rng, s51.T, 50, 20.0, 5.0);
      const Trajectory fwd = forward_solve(gens, c, x0, tight, counter);
      const std::vector<DensityMatrix> ref = complex_oracle_solve(params, c, rho0, tight);
      const std::vector<Vec9> xs = fwd.states();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        worst = std::max(worst, (derealify(xs[i]) - ref[i]).norm());
      }
      const Trajectory loose = forward_solve(gens, c, x0, IntegratorConfig{}, counter);
      for (const Vec9& x : loose.node_states()) {
        trace_drift = std::max(trace_drift, std::abs(trace_of(x) - 1.0));
        min_eig = std::min(min_eig, min_eigenvalue(derealify(x)));
      }
    }
    checks.push_back({"realified_vs_complex_oracle", worst <= 1e-8, worst, 1e-8, "max Frobenius deviation"});
    checks.push_back({"trace_preservation", trace_drift <= 1e-9, trace_drift, 1e-9, "max |Tr rho - 1|"});
    checks.push_back({"positivity", min_eig >= -1e-7, min_eig, -1e-7, "min eigenvalue"});
  }

  // Adjoint gradient against central differences, J2 on the 5.1 setup.
  {
    ScenarioConfig small = s51;
    small.N = 20;
    small.integrator = tight;
    Problem p = small.make_problem();
    p.gens = gens;
    // shift the noise channels off the n >= 0 boundary so central differences stay admissible
    ControlGrid c = small.initial_guess();
    for (std::size_t i = 0; i < c.cells(); ++i) {
      c.n1[i] += 0.3;
      c.n2[i] += 0.2;
    }
    CauchyCounter counter;
    const Trajectory fwd = forward_solve(p.gens, c, p.x0, tight, counter);
    const AdjointTrajectory adj = adjoint_solve(p.gens, c, p.objective, fwd, tight, counter);
    const ControlGradient g = gradient(p.params, c, fwd, adj);
    const double h = 1e-5;
    const double width = c.cell_width();
    // rounding in J limits central differences to about 16 eps / h
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() / h / 1e-4;
    auto channel = [](ControlGrid& grid, int ch) -> std::vector<double>& {
      return ch == 0 ? grid.u : ch == 1 ? grid.n1 : grid.n2;
    };
    double worst = 0.0;
    for (int ch = 0; ch < 3; ++ch) {
      const std::vector<double>& gv = ch == 0 ? g.gu : ch == 1 ? g.gn1 : g.gn2;
      for (std::size_t i = 0; i < c.cells(); ++i) {
        ControlGrid plus = c;
        ControlGrid minus = c;
        channel(plus, ch)[i] += h;
        channel(minus, ch)[i] -= h;
        const double fd =
            (terminal_objective(p, plus, tight) - terminal_objective(p, minus, tight)) / (2.0 * h);
        const double adjoint_value = gv[i] * width;
        const double err = std::abs(fd - adjoint_value) / std::max(std::abs(adjoint_value), floor);
        worst = std::max(worst, err);
      }
    }
    checks.push_back({"gradient_finite_difference", worst <= 1e-4, worst, 1e-4, "max relative error"});
  }

  // Krotov iterations never increase J1.
  {
    ScenarioConfig s53 = preset("5.3");
    s53.N = 200;
    s53.gpm.max_iters = 25;
    Problem p = s53.make_problem();
    p.gens = gens;
    const RunReport r = run(Method::RKM, p, s53.initial_guess(), s53.gpm);
    double worst = 0.0;
    for (std::size_t k = 1; k < r.history.size(); ++k) {
      worst = std::max(worst, r.history[k].objective - r.history[k - 1].objective);
    }
    checks.push_back({"rkm_monotonicity", worst <= 1e-9, worst, 1e-9, "max objective increase"});
  }

  log << std::setprecision(6);
  for (const ValidationCheck& c : checks) {
    log << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": observed " << c.observed
        << ", threshold " << c.threshold;
    if (!c.detail.empty()) log << " (" << c.detail << ")";
    log << '\n';
  }
  return checks;
}

}  // namespace qutrit
