#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "susyinv/susyinv.hpp"

using namespace susyinv;
using TF = TimeFunction;

namespace {

Operator random_operator(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Operator a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) a(i, k) = cplx(g(rng), g(rng));
  return a / std::sqrt(static_cast<double>(n));
}

void BM_expm(benchmark::State& state) {
  const Operator a = random_operator(state.range(0), 7);
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_expm)->Arg(8)->Arg(32)->Arg(128);

void BM_step_exponential(benchmark::State& state) {
  const Operator a = random_operator(state.range(0), 11);
  const Operator h = (a + a.adjoint()) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(step_exponential(h, 1e-3));
}
BENCHMARK(BM_step_exponential)->Arg(8)->Arg(32)->Arg(128);

void BM_gauge_hamiltonian_spin(benchmark::State& state) {
  const SpinRep s = make_spin(static_cast<double>(state.range(0)) / 2.0);
  const GaugeCurve w = GaugeCurve::spin(s, TF::constant(0.3) + 0.2 * TF::sine(1.0, 0.0), TF::linear(1.5));
  const YSpec y = YSpec::spin(s, TF::constant(0.5));
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hamiltonian_from_gauge(w, y, t));
    t += 1e-3;
  }
}
BENCHMARK(BM_gauge_hamiltonian_spin)->Arg(1)->Arg(4)->Arg(16);

void BM_gauge_hamiltonian_oscillator(benchmark::State& state) {
  const OscillatorRep osc = make_oscillator(state.range(0));
  const GaugeCurve w = GaugeCurve::oscillator(osc, 0.3 * TF::sine(1.0, 0.0), TF::linear(1.5));
  const YSpec y = YSpec::oscillator(osc, TF::constant(0.5));
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hamiltonian_from_gauge(w, y, t));
    t += 1e-3;
  }
}
BENCHMARK(BM_gauge_hamiltonian_oscillator)->Arg(32)->Arg(64);

// Full propagation over T = 1, dt = 1e-3.
void BM_propagate_spin(benchmark::State& state) {
  const SpinRep s = make_spin(static_cast<double>(state.range(0)) / 2.0);
  const GaugeCurve w = GaugeCurve::spin(s, TF::constant(std::numbers::pi / 4), TF::linear(2.0));
  const YSpec y = YSpec::spin(s, TF::constant(0.5));
  const OperatorMap h = [&](double t) { return hamiltonian_from_gauge(w, y, t); };
  State psi0 = State::Zero(s.dim);
  psi0(0) = 1.0;
  const Grid grid = make_grid(1.0, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(h, psi0, grid));
}
BENCHMARK(BM_propagate_spin)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_berry_holonomy(benchmark::State& state) {
  const SpinRep s = make_spin(0.5);
  const GaugeCurve w = GaugeCurve::spin(s, TF::constant(std::numbers::pi / 3), TF::linear(2.0 * std::numbers::pi));
  const Operator f0 = Operator::Identity(2, 1);
  const OperatorMap frame = [&](double u) -> Operator { return w.W(u) * f0; };
  for (auto _ : state) benchmark::DoNotOptimize(berry_holonomy(frame, state.range(0)));
}
BENCHMARK(BM_berry_holonomy)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
