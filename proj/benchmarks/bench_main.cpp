#include "ptfid/biortho.hpp"
#include "ptfid/ssh.hpp"
#include "ptfid/xxz.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace ptfid;

static void BM_BiorthogonalEig(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  CMatrix h(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) h(i, j) = cplx(nd(rng), nd(rng));
  for (auto _ : state) benchmark::DoNotOptimize(biorthogonal_eig(h));
}
BENCHMARK(BM_BiorthogonalEig)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_SshManyBodyFidelity(benchmark::State& state) {
  const ssh::SshParams p{1.0, 0.9, 0.0, 0.2, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(ssh::many_body_fidelity(p, 0.9, 0.9001));
}
BENCHMARK(BM_SshManyBodyFidelity)->Arg(101)->Arg(505);

static void BM_SshChiTotal(benchmark::State& state) {
  const ssh::SshParams p{1.0, 0.9, 0.0, 0.2, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(ssh::chi_total(p));
}
BENCHMARK(BM_SshChiTotal)->Arg(101)->Arg(505);

static void BM_SshBerryPhase(benchmark::State& state) {
  const ssh::SshParams p{1.0, 1.4, 0.0, 0.2, 101};
  ssh::BerryOptions opt;
  opt.n_k = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ssh::complex_berry_phase(p, -1, ssh::BerryMethod::numeric, opt));
}
BENCHMARK(BM_SshBerryPhase)->Arg(1024)->Arg(4096);

static void BM_XxzHamiltonian(benchmark::State& state) {
  const xxz::XxzParams p{1.0, 0.5, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(xxz::build_hamiltonian(p));
}
BENCHMARK(BM_XxzHamiltonian)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_XxzLanczos(benchmark::State& state) {
  const xxz::XxzParams p{1.0, 0.5, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(xxz::ground_state(p));
}
BENCHMARK(BM_XxzLanczos)->Arg(10)->Arg(14)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
