#include "qutrit/adjoint.hpp"
#include "qutrit/dynamics.hpp"
#include "qutrit/optimizers.hpp"
#include "qutrit/scenario.hpp"

#include <benchmark/benchmark.h>

using namespace qutrit;

namespace {

struct Setup {
  ScenarioConfig cfg = preset("5.1");
  Problem problem = cfg.make_problem();
  ControlGrid c = cfg.initial_guess();
};

void BM_ForwardSolve(benchmark::State& state) {
  Setup s;
  s.c = ControlGrid::constant(s.cfg.T, static_cast<std::size_t>(state.range(0)), 1.0, 0.5, 0.5);
  CauchyCounter counter;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_solve(s.problem.gens, s.c, s.problem.x0, s.problem.integrator, counter));
  }
}
BENCHMARK(BM_ForwardSolve)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_AdjointSolve(benchmark::State& state) {
  Setup s;
  CauchyCounter counter;
  const Trajectory fwd = forward_solve(s.problem.gens, s.c, s.problem.x0, s.problem.integrator, counter);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        adjoint_solve(s.problem.gens, s.c, s.problem.objective, fwd, s.problem.integrator, counter));
  }
}
BENCHMARK(BM_AdjointSolve)->Unit(benchmark::kMicrosecond);

void BM_Gradient(benchmark::State& state) {
  Setup s;
  CauchyCounter counter;
  const Trajectory fwd = forward_solve(s.problem.gens, s.c, s.problem.x0, s.problem.integrator, counter);
  const AdjointTrajectory adj =
      adjoint_solve(s.problem.gens, s.c, s.problem.objective, fwd, s.problem.integrator, counter);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(s.problem.params, s.c, fwd, adj));
}
BENCHMARK(BM_Gradient)->Unit(benchmark::kMicrosecond);

void BM_Gpm3Iteration(benchmark::State& state) {
  Setup s;
  GpmConfig cfg = s.cfg.gpm;
  cfg.max_iters = 11;
  cfg.eps_stop = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(run(Method::GPM3, s.problem, s.c, cfg));
}
BENCHMARK(BM_Gpm3Iteration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
