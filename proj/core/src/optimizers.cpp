#include "qutrit/optimizers.hpp"

#include "qutrit/dynamics.hpp"
#include "qutrit/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace qutrit {

namespace {

// Momentum terms are only formed when their coefficient is nonzero, so that
// GPM-2 with beta = 0 and GPM-3 with theta = 0 reproduce the lower-order
// steps bit for bit.
double momentum_step(double c, double g, double alpha, double beta, const double* prev,
                     double theta, const double* prev2) {
  double v = c - alpha * g;
  if (beta != 0.0) v += beta * (c - *prev);
  if (theta != 0.0) v += theta * (*prev - *prev2);
  return v;
}

ControlGrid heavy_ball(const ControlGrid& ck, const ControlGrid* ckm1, const ControlGrid* ckm2,
                       const ControlGradient& grad, double alpha, double beta, double theta,
                       const ControlBounds& bounds) {
  const std::size_t N = ck.cells();
  if (grad.cells() != N) throw InvalidArgument("gradient and control have different cell counts");
  if (ckm1 && ckm1->cells() != N) throw InvalidArgument("previous iterate has wrong cell count");
  if (ckm2 && ckm2->cells() != N) throw InvalidArgument("previous iterate has wrong cell count");
  if (beta != 0.0 && !ckm1) throw InvalidArgument("momentum step needs the previous iterate");
  if (theta != 0.0 && (!ckm1 || !ckm2)) throw InvalidArgument("GPM-3 step needs two previous iterates");

  ControlGrid out;
  out.T = ck.T;
  out.u.resize(N);
  out.n1.resize(N);
  out.n2.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double* pu = ckm1 ? &ckm1->u[i] : nullptr;
    const double* pn1 = ckm1 ? &ckm1->n1[i] : nullptr;
    const double* pn2 = ckm1 ? &ckm1->n2[i] : nullptr;
    const double* qu = ckm2 ? &ckm2->u[i] : nullptr;
    const double* qn1 = ckm2 ? &ckm2->n1[i] : nullptr;
    const double* qn2 = ckm2 ? &ckm2->n2[i] : nullptr;
    out.u[i] = bounds.clamp_u(momentum_step(ck.u[i], grad.gu[i], alpha, beta, pu, theta, qu));
    out.n1[i] = bounds.clamp_n(momentum_step(ck.n1[i], grad.gn1[i], alpha, beta, pn1, theta, qn1));
    out.n2[i] = bounds.clamp_n(momentum_step(ck.n2[i], grad.gn2[i], alpha, beta, pn2, theta, qn2));
  }
  return out;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::GPM1: return "GPM-1";
    case Method::GPM2: return "GPM-2";
    case Method::GPM3: return "GPM-3";
    case Method::RKM: return "RKM";
  }
  return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
  std::string s;
  for (char ch : name) {
    if (ch != '-' && ch != '_') s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (s == "gpm1") return Method::GPM1;
  if (s == "gpm2") return Method::GPM2;
  if (s == "gpm3") return Method::GPM3;
  if (s == "rkm" || s == "krotov") return Method::RKM;
  return std::nullopt;
}

void GpmConfig::validate() const {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be nonnegative");
  if (!(theta >= 0.0)) throw InvalidArgument("theta must be nonnegative");
  if (std::isnan(eps_stop)) throw InvalidArgument("eps_stop must be a number");
  if (max_iters == 0) throw InvalidArgument("max_iters must be at least 1");
}

Problem Problem::make(const SystemParams& params, const DensityMatrix& rho0,
                      const Objective& objective, const ControlBounds& bounds,
                      const IntegratorConfig& integrator) {
  validate_density_matrix(rho0);
  integrator.validate();
  Problem p;
  p.params = params;
  p.gens = build_generators(params);
  p.x0 = realify(rho0);
  p.objective = objective;
  p.bounds = bounds;
  p.integrator = integrator;
  return p;
}

ControlGrid project(const ControlGrid& c, const ControlBounds& bounds) {
  ControlGrid out = c;
  for (std::size_t i = 0; i < out.cells(); ++i) {
    out.u[i] = bounds.clamp_u(out.u[i]);
    out.n1[i] = bounds.clamp_n(out.n1[i]);
    out.n2[i] = bounds.clamp_n(out.n2[i]);
  }
  return out;
}

ControlGrid gpm1_step(const ControlGrid& ck, const ControlGradient& grad, const GpmConfig& cfg,
                      const ControlBounds& bounds) {
  return heavy_ball(ck, nullptr, nullptr, grad, cfg.alpha, 0.0, 0.0, bounds);
}

ControlGrid gpm2_step(const ControlGrid& ck, const ControlGrid& ckm1, const ControlGradient& grad,
                      const GpmConfig& cfg, const ControlBounds& bounds) {
  return heavy_ball(ck, &ckm1, nullptr, grad, cfg.alpha, cfg.beta, 0.0, bounds);
}

ControlGrid gpm3_step(const ControlGrid& ck, const ControlGrid& ckm1, const ControlGrid& ckm2,
                      const ControlGradient& grad, const GpmConfig& cfg,
                      const ControlBounds& bounds) {
  return heavy_ball(ck, &ckm1, &ckm2, grad, cfg.alpha, cfg.beta, cfg.theta, bounds);
}

RkmStep rkm_step(const ControlGrid& ck, const AdjointTrajectory& adj_k, double alpha,
                 const Problem& problem, CauchyCounter& counter) {
  ck.validate();
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (adj_k.cells() != ck.cells()) throw InvalidArgument("adjoint and control have different cell counts");
  const Generators& G = problem.gens;
  const ControlBounds& Q = problem.bounds;

  struct Feedback {
    double u, n1, n2;
  };
  auto feedback = [&](std::size_t cell, const Vec9& x, const Vec9& y, Vec9& bu, Vec9& b1,
                      Vec9& b2) {
    bu.noalias() = G.Bu * x;
    b1.noalias() = G.Bn1 * x;
    b2.noalias() = G.Bn2 * x;
    return Feedback{Q.clamp_u(ck.u[cell] + alpha * y.dot(bu)),
                    Q.clamp_n(ck.n1[cell] + alpha * y.dot(b1)),
                    Q.clamp_n(ck.n2[cell] + alpha * y.dot(b2))};
  };

  Vec9 bu, b1, b2, ax;
  auto rhs = [&](std::size_t cell, double t, const Vec9& x, Vec9& dxdt) {
    const Vec9 y = adj_k.in_cell(cell, t);
    const Feedback c = feedback(cell, x, y, bu, b1, b2);
    ax.noalias() = G.A * x;
    dxdt = ax + c.u * bu + c.n1 * b1 + c.n2 * b2;
  };
  RkmStep out;
  out.trajectory = Trajectory::integrate(rhs, problem.x0, ck.T, ck.cells(), problem.integrator);
  counter.increment();

  const std::size_t N = ck.cells();
  out.control.T = ck.T;
  out.control.u.assign(N, 0.0);
  out.control.n1.assign(N, 0.0);
  out.control.n2.assign(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double t0 = ck.grid_time(i);
    const double h = ck.grid_time(i + 1) - t0;
    for (int q = 0; q < 3; ++q) {
      const double t = t0 + kGaussNodes[q] * h;
      const Feedback c =
          feedback(i, out.trajectory.in_cell(i, t), adj_k.in_cell(i, t), bu, b1, b2);
      out.control.u[i] += kGaussWeights[q] * c.u;
      out.control.n1[i] += kGaussWeights[q] * c.n1;
      out.control.n2[i] += kGaussWeights[q] * c.n2;
    }
  }
  // averages of admissible values are admissible up to rounding
  out.control = project(out.control, Q);
  return out;
}

RunReport run(Method method, const Problem& problem, const ControlGrid& c0, const GpmConfig& cfg,
              const IterateObserver& observe) {
  cfg.validate();
  c0.validate();
  if (method == Method::RKM && problem.objective.kind != ObjectiveKind::Overlap) {
    throw InvalidArgument("RKM is only available for the overlap objective J1");
  }

  CauchyCounter counter;
  RunReport report;
  report.method = method;

  ControlGrid c = project(c0, problem.bounds);
  ControlGrid prev;
  ControlGrid prev2;
  Trajectory fwd = forward_solve(problem.gens, c, problem.x0, problem.integrator, counter);
  double J = eval_objective(problem.objective, fwd.final_state());
  report.best_objective = J;
  report.best_control = c;

  for (std::size_t k = 0;; ++k) {
    report.history.push_back({k, J, counter.count()});
    if (observe) observe(k, c, fwd);
    if (J < report.best_objective) {
      report.best_objective = J;
      report.best_control = c;
    }
    if (J <= cfg.eps_stop) {
      report.converged = true;
      break;
    }
    if (!std::isfinite(J) || k + 1 >= cfg.max_iters) break;

    const AdjointTrajectory adj =
        adjoint_solve(problem.gens, c, problem.objective, fwd, problem.integrator, counter);

    if (method == Method::RKM) {
      RkmStep step = rkm_step(c, adj, cfg.alpha, problem, counter);
      c = std::move(step.control);
      fwd = std::move(step.trajectory);
    } else {
      const ControlGradient g = gradient(problem.params, c, fwd, adj);
      ControlGrid next;
      // GPM-2 starts with one GPM-1 step; GPM-3 with one GPM-1 and one GPM-2 step.
      if (method == Method::GPM1 || k == 0) {
        next = gpm1_step(c, g, cfg, problem.bounds);
      } else if (method == Method::GPM2 || k == 1) {
        next = gpm2_step(c, prev, g, cfg, problem.bounds);
      } else {
        next = gpm3_step(c, prev, prev2, g, cfg, problem.bounds);
      }
      prev2 = std::move(prev);
      prev = std::move(c);
      c = std::move(next);
      fwd = forward_solve(problem.gens, c, problem.x0, problem.integrator, counter);
    }
    J = eval_objective(problem.objective, fwd.final_state());
  }

  report.cauchy_problems = counter.count();
  report.final_control = std::move(c);
  report.final_trajectory = std::move(fwd);
  return report;
}

}  // namespace qutrit
