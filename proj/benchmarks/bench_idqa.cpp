#include <random>

#include <benchmark/benchmark.h>

#include "idqa/codegen.hpp"
#include "idqa/dynamics.hpp"
#include "idqa/spectral.hpp"

namespace {

idqa::Amplitudes random_state(std::size_t dim) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  idqa::Amplitudes a(dim);
  for (auto& z : a) z = {g(rng), g(rng)};
  const double n = std::sqrt(idqa::norm_squared(a));
  for (auto& z : a) z /= n;
  return a;
}

void BM_Rhs(benchmark::State& state) {
  idqa::InterpolatedDynamics dyn(idqa::build_quantum_signature(), idqa::DynamicsParams{});
  const auto c = random_state(256);
  idqa::Amplitudes out(256);
  double B = 0.4;
  for (auto _ : state) {
    dyn.rhs(1.0 - B, B, c, out);
    benchmark::DoNotOptimize(out.data());
    B = B == 0.4 ? 0.41 : 0.4;  // exercise the rate-cache refresh
  }
}
BENCHMARK(BM_Rhs);

void BM_ProgramEvaluate(benchmark::State& state) {
  const auto program = idqa::codegen::generate_rhs_program(idqa::build_quantum_signature());
  const auto c = random_state(256);
  for (auto _ : state) {
    auto out = idqa::codegen::evaluate(program, {0.6, 0.4, 0.3, 0.0045, 1e-24}, c);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ProgramEvaluate);

void BM_Integrate(benchmark::State& state) {
  const auto model = idqa::build_quantum_signature();
  idqa::DynamicsParams p;
  p.snapshot_every = 1000000;
  const idqa::ControlSchedule sched(idqa::make_pause_path(5.0, 5.0, 0.46), idqa::ScheduleCurves::linear());
  for (auto _ : state) {
    auto traj = idqa::integrate(model, sched, p);
    state.counters["rhs_evals"] = static_cast<double>(traj.rhs_evaluations);
  }
}
BENCHMARK(BM_Integrate)->Unit(benchmark::kMillisecond);

void BM_Eigensystem(benchmark::State& state) {
  const auto model = idqa::build_quantum_signature();
  for (auto _ : state) {
    auto eig = idqa::eigensystem(model, idqa::ScheduleCurves::linear(), 0.46);
    benchmark::DoNotOptimize(eig.eigenvalues.data());
  }
}
BENCHMARK(BM_Eigensystem)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
