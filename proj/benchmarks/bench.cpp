// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the hot paths: Hamiltonian assembly, the hierarchical
// eigensolves, the Rabi diagonalization, noise synthesis, and the Welch
// estimator. Run the binary directly; the suite is not part of ctest.

#include <benchmark/benchmark.h>

#include <vector>

#include "fluxqp/circuit.hpp"
#include "fluxqp/extract.hpp"
#include "fluxqp/noise.hpp"
#include "fluxqp/rabi.hpp"
#include "fluxqp/synth.hpp"

namespace circuit = fluxqp::circuit;
namespace extract = fluxqp::extract;
namespace noise = fluxqp::noise;
namespace rabi = fluxqp::rabi;
namespace synth = fluxqp::synth;

namespace {

circuit::BasisSpec bench_basis() {
  circuit::BasisSpec basis;
  basis.n_charge = 3;
  basis.n_harm = 8;
  basis.n_fock = 8;
  basis.n_levels_kept = 12;
  return basis;
}

void BM_AssembleQubitReal(benchmark::State& state) {
  const circuit::CircuitParams params;
  const circuit::BasisSpec basis;  // production cutoffs
  for (auto _ : state) {
    benchmark::DoNotOptimize(circuit::assemble_qubit_hamiltonian_real(
        params, circuit::ChargeConfig{}, circuit::FluxBias{0.5}, basis));
  }
}
BENCHMARK(BM_AssembleQubitReal)->Unit(benchmark::kMillisecond);

void BM_SolveQubitReal(benchmark::State& state) {
  const circuit::CircuitParams params;
  const circuit::BasisSpec basis = bench_basis();
  for (auto _ : state) {
    benchmark::DoNotOptimize(circuit::solve_qubit(
        params, circuit::ChargeConfig{}, circuit::FluxBias{0.5}, basis, 16));
  }
}
BENCHMARK(BM_SolveQubitReal)->Unit(benchmark::kMillisecond);

void BM_SolveQubitComplex(benchmark::State& state) {
  const circuit::CircuitParams params;
  const circuit::BasisSpec basis = bench_basis();
  for (auto _ : state) {
    benchmark::DoNotOptimize(circuit::solve_qubit(
        params, circuit::ChargeConfig{}, circuit::FluxBias{0.5018}, basis, 16));
  }
}
BENCHMARK(BM_SolveQubitComplex)->Unit(benchmark::kMillisecond);

void BM_SolveTotal(benchmark::State& state) {
  const circuit::CircuitParams params;
  const circuit::BasisSpec basis = bench_basis();
  circuit::ChargeConfig q;
  q.q_e[1] = 0.15;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        circuit::solve_total(params, q, circuit::FluxBias{0.5018}, basis));
  }
}
BENCHMARK(BM_SolveTotal)->Unit(benchmark::kMillisecond);

void BM_RabiEigs(benchmark::State& state) {
  rabi::RabiParams params;
  params.epsilon_ghz = 1.64;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rabi::rabi_eigs(params));
  }
}
BENCHMARK(BM_RabiEigs)->Unit(benchmark::kMicrosecond);

void BM_GenerateOneOverF(benchmark::State& state) {
  const double s1hz = 0.0406 * 0.0406;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        noise::generate_one_over_f(s1hz, 1.0, 84000, 1.0 / 3.0, 42));
  }
}
BENCHMARK(BM_GenerateOneOverF)->Unit(benchmark::kMillisecond);

void BM_ComputePsd(benchmark::State& state) {
  const auto series =
      noise::generate_one_over_f(0.0406 * 0.0406, 1.0, 84000, 1.0 / 3.0, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(noise::compute_psd(series, 1.0 / 3.0));
  }
}
BENCHMARK(BM_ComputePsd)->Unit(benchmark::kMillisecond);

void BM_SynthTraceStack(benchmark::State& state) {
  const auto map = synth::make_cosine_map(4.526, 0.018);
  synth::TraceStackConfig config;
  config.n_traces = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(synth::synth_trace_stack(map, config, 12345));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthTraceStack)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ExtractSplitSeries(benchmark::State& state) {
  const auto map = synth::make_cosine_map(4.526, 0.018);
  synth::TraceStackConfig config;
  config.n_traces = static_cast<int>(state.range(0));
  const auto stack = synth::synth_trace_stack(map, config, 12345);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract::extract_split_series(stack));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExtractSplitSeries)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
