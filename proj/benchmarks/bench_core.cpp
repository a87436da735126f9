#include <benchmark/benchmark.h>

#include <random>

#include "hamlow/circuit.hpp"
#include "hamlow/density.hpp"
#include "hamlow/filter.hpp"
#include "hamlow/instance_gen.hpp"
#include "hamlow/optimize.hpp"
#include "hamlow/spectrum.hpp"

namespace {

using namespace hamlow;

LocalHamiltonian instance_for(int n) { return random_instance({n, 3, 2 * n, "pm1", 1}); }

void BM_AssembleMatrix(benchmark::State& state) {
  const auto h = instance_for(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_matrix(h));
}
BENCHMARK(BM_AssembleMatrix)->Arg(6)->Arg(8)->Arg(10);

void BM_Diagonalize(benchmark::State& state) {
  const auto h = instance_for(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(h, false));
}
BENCHMARK(BM_Diagonalize)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ApplyCircuit(benchmark::State& state) {
  const int n = int(state.range(0));
  std::mt19937_64 rng(3);
  auto c = BrickworkCircuit::brick_layout(n, 4);
  for (int l = 0; l < c.depth(); ++l)
    for (std::size_t g = 0; g < c.layers()[l].size(); ++g) {
      GateParams p;
      for (double& v : p) v = 0.3 * (double(rng() >> 11) * 0x1.0p-53 - 0.5);
      c.set_gate_params(l, int(g), p);
    }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index(1) << n);
  psi(0) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(apply_circuit(c, psi));
}
BENCHMARK(BM_ApplyCircuit)->Arg(8)->Arg(10)->Arg(12);

void BM_CertifyGrid(benchmark::State& state) {
  const auto h = instance_for(int(state.range(0)));
  const double e0 = energy_zero_state(h);
  for (auto _ : state) benchmark::DoNotOptimize(certify_density(h, e0, 0.3));
}
BENCHMARK(BM_CertifyGrid)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ChebyshevFilter(benchmark::State& state) {
  const int degree = int(state.range(0));
  const auto h = instance_for(5);
  const auto sys = make_extended(h);
  const auto psi = maximally_entangled(5);
  const double x = sys.spectral.ground_energy() + 0.4 * h.total_strength();
  const double y = 0.1 * h.total_strength();
  for (auto _ : state) benchmark::DoNotOptimize(chebyshev_filter(sys, psi, x, y, degree));
}
BENCHMARK(BM_ChebyshevFilter)->Arg(64)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_EstimateEnergy(benchmark::State& state) {
  const auto h = instance_for(5);
  const auto sys = make_extended(h);
  const auto out = prepare_low_energy(sys, 0.2, energy_zero_state(h), FilterMode::exact);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_energy(out.reduced_density, h, int(state.range(0)), 7));
}
BENCHMARK(BM_EstimateEnergy)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
