#include "qutrit/integrator.hpp"

#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/controlled_step_result.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace qutrit {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 9>;

inline Vec9 to_vec(const State& s) { return Eigen::Map<const Vec9>(s.data()); }
inline void to_state(const Vec9& v, State& s) { Eigen::Map<Vec9>(s.data()) = v; }

double edge(double T, std::size_t i, std::size_t N) {
  return i == N ? T : T * static_cast<double>(i) / static_cast<double>(N);
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0)) throw InvalidArgument("rel_tol must be positive");
  if (!(abs_tol > 0.0)) throw InvalidArgument("abs_tol must be positive");
  if (max_step && !(*max_step > 0.0)) throw InvalidArgument("max_step must be positive");
}

Trajectory Trajectory::integrate(const CellRhs& rhs, const Vec9& x0, double T, std::size_t N,
                                 const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(T > 0.0)) throw InvalidArgument("integration horizon must be positive");
  if (N == 0) throw InvalidArgument("integration grid needs at least one cell");

  auto stepper = odeint::make_controlled(cfg.abs_tol, cfg.rel_tol, odeint::runge_kutta_dopri5<State>());

  Trajectory traj;
  traj.T_ = T;
  traj.offsets_.reserve(N + 1);
  traj.t_.reserve(3 * N);
  traj.x_.reserve(3 * N);
  traj.f_.reserve(3 * N);

  State x;
  to_state(x0, x);
  State f{};
  State x_new{};
  State f_new{};
  Vec9 xv;
  Vec9 fv;
  double dt = cfg.max_step ? std::min(*cfg.max_step, T / static_cast<double>(N))
                           : T / static_cast<double>(N);

  for (std::size_t cell = 0; cell < N; ++cell) {
    const double t0 = edge(T, cell, N);
    const double t1 = edge(T, cell + 1, N);
    auto system = [&rhs, cell, &xv, &fv](const State& s, State& ds, double t) {
      xv = to_vec(s);
      rhs(cell, t, xv, fv);
      to_state(fv, ds);
    };

    system(x, f, t0);
    traj.offsets_.push_back(traj.t_.size());
    traj.t_.push_back(t0);
    traj.x_.push_back(to_vec(x));
    traj.f_.push_back(to_vec(f));

    double t = t0;
    const double min_dt = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t1));
    while (t < t1) {
      double step = dt;
      if (cfg.max_step) step = std::min(step, *cfg.max_step);
      const bool last = step >= (t1 - t) * (1.0 - 1e-12);
      if (last) step = t1 - t;
      const double t_before = t;
      const auto res = stepper.try_step(system, x, f, t, x_new, f_new, step);
      if (res == odeint::success) {
        t = last ? t1 : t;
        x = x_new;
        f = f_new;
        traj.t_.push_back(t);
        traj.x_.push_back(to_vec(x));
        traj.f_.push_back(to_vec(f));
        // a truncated final step should not shrink the next cell's first guess
        dt = last ? std::max(dt, step) : step;
      } else {
        dt = step;
        if (dt < min_dt || !std::isfinite(dt)) {
          std::ostringstream os;
          os.precision(17);
          os << "step size underflow at t = " << t_before;
          throw IntegrationError(os.str(), t_before);
        }
      }
      for (double v : x) {
        if (!std::isfinite(v)) {
          std::ostringstream os;
          os.precision(17);
          os << "non-finite state at t = " << t;
          throw IntegrationError(os.str(), t);
        }
      }
    }
  }
  traj.offsets_.push_back(traj.t_.size());
  return traj;
}

Trajectory Trajectory::reversed() const {
  Trajectory r;
  r.T_ = T_;
  const std::size_t N = cells();
  r.t_.reserve(t_.size());
  r.x_.reserve(x_.size());
  r.f_.reserve(f_.size());
  r.offsets_.reserve(N + 1);
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t old = N - 1 - k;
    const std::size_t b = offsets_[old];
    const std::size_t e = offsets_[old + 1];
    r.offsets_.push_back(r.t_.size());
    for (std::size_t j = e; j-- > b;) {
      double t = T_ - t_[j];
      if (j == e - 1) t = edge(T_, k, N);
      if (j == b) t = edge(T_, k + 1, N);
      r.t_.push_back(t);
      r.x_.push_back(x_[j]);
      r.f_.push_back(-f_[j]);
    }
  }
  r.offsets_.push_back(r.t_.size());
  return r;
}

std::vector<double> Trajectory::times() const {
  const std::size_t N = cells();
  std::vector<double> out(N + 1);
  for (std::size_t i = 0; i <= N; ++i) out[i] = edge(T_, i, N);
  return out;
}

std::vector<Vec9> Trajectory::states() const {
  const std::size_t N = cells();
  std::vector<Vec9> out;
  out.reserve(N + 1);
  for (std::size_t i = 0; i < N; ++i) out.push_back(x_[offsets_[i]]);
  out.push_back(x_.back());
  return out;
}

std::size_t Trajectory::cell_index(double t) const {
  const std::size_t N = cells();
  if (!(t > 0.0)) return 0;
  const auto i = static_cast<std::size_t>(std::floor(t / T_ * static_cast<double>(N)));
  return std::min(i, N - 1);
}

Vec9 Trajectory::at(double t) const { return in_cell(cell_index(t), t); }

Vec9 Trajectory::in_cell(std::size_t cell, double t) const {
  const std::size_t b = offsets_[cell];
  const std::size_t e = offsets_[cell + 1];
  t = std::clamp(t, t_[b], t_[e - 1]);
  // first node with time > t, kept inside (b, e-1]
  auto it = std::upper_bound(t_.begin() + static_cast<std::ptrdiff_t>(b),
                             t_.begin() + static_cast<std::ptrdiff_t>(e - 1), t);
  std::size_t hi = static_cast<std::size_t>(it - t_.begin());
  hi = std::clamp(hi, b + 1, e - 1);
  const std::size_t lo = hi - 1;
  const double h = t_[hi] - t_[lo];
  if (h <= 0.0) return x_[lo];
  const double s = (t - t_[lo]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * x_[lo] + (h10 * h) * f_[lo] + h01 * x_[hi] + (h11 * h) * f_[hi];
}

}  // namespace qutrit
