// OpenMP kernels against their serial references, plus the spectral
// operators that dominate a solver iteration.
//
//   bench_kernels --benchmark_filter=Dot

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "tfdw/kernels.hpp"
#include "tfdw/model.hpp"
#include "tfdw/operators.hpp"

using namespace tfdw;

namespace {

struct Data {
  std::size_t n;
  std::vector<double> u, v, w, out;
  explicit Data(std::size_t n_) : n(n_), u(n * n), v(n * n), w(n * n), out(n * n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (std::size_t i = 0; i < n * n; ++i) {
      u[i] = g(rng);
      v[i] = g(rng);
      w[i] = g(rng);
    }
  }
};

void set_bytes(benchmark::State& s, std::size_t arrays, std::size_t n) {
  s.SetBytesProcessed(static_cast<std::int64_t>(s.iterations() * arrays * n * n * sizeof(double)));
}

void BM_Dot(benchmark::State& s) {
  const Data d(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::dot(d.u, d.v, d.n));
  set_bytes(s, 2, d.n);
}
void BM_DotSerial(benchmark::State& s) {
  const Data d(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::serial::dot(d.u, d.v));
  set_bytes(s, 2, d.n);
}

void BM_LocalSums(benchmark::State& s) {
  const Data d(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::local_energy_sums(d.u, d.v, 0.5, Branch::Signed, d.n));
  set_bytes(s, 2, d.n);
}
void BM_LocalSumsSerial(benchmark::State& s) {
  const Data d(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::serial::local_energy_sums(d.u, d.v, 0.5, Branch::Signed));
  set_bytes(s, 2, d.n);
}

void BM_Residual(benchmark::State& s) {
  Data d(s.range(0));
  for (auto _ : s) {
    kernels::el_residual(d.w, d.u, d.v, d.w, 1.0, 1.0, 0.5, d.out);
    benchmark::ClobberMemory();
  }
  set_bytes(s, 5, d.n);
}
void BM_ResidualSerial(benchmark::State& s) {
  Data d(s.range(0));
  for (auto _ : s) {
    kernels::serial::el_residual(d.w, d.u, d.v, d.w, 1.0, 1.0, 0.5, d.out);
    benchmark::ClobberMemory();
  }
  set_bytes(s, 5, d.n);
}

void BM_StepReflect(benchmark::State& s) {
  Data d(s.range(0));
  for (auto _ : s) {
    kernels::step_reflect(d.u, d.v, 0.3, 0.5, d.out);
    benchmark::ClobberMemory();
  }
  set_bytes(s, 3, d.n);
}
void BM_StepReflectSerial(benchmark::State& s) {
  Data d(s.range(0));
  for (auto _ : s) {
    kernels::serial::step_reflect(d.u, d.v, 0.3, 0.5, d.out);
    benchmark::ClobberMemory();
  }
  set_bytes(s, 3, d.n);
}

void BM_HalfLaplacian(benchmark::State& s) {
  const Grid2D g = make_grid(s.range(0), 100.0);
  SpectralPlan plan(g);
  const Field v = potential_v0(g);
  std::vector<double> out(g.size());
  for (auto _ : s) {
    plan.half_laplacian(v.values(), out);
    benchmark::ClobberMemory();
  }
}

void BM_HalfLaplacianPadded(benchmark::State& s) {
  const Grid2D g = make_grid(s.range(0), 100.0);
  SpectralPlan plan(g);
  const Field v = potential_v0(g);
  std::vector<double> out(g.size());
  for (auto _ : s) {
    plan.half_laplacian_padded(v.values(), out);
    benchmark::ClobberMemory();
  }
}

void BM_Riesz(benchmark::State& s) {
  const Grid2D g = make_grid(s.range(0), 100.0);
  SpectralPlan plan(g);
  const Field v = potential_v0(g);
  std::vector<double> out(g.size());
  for (auto _ : s) {
    plan.riesz(v.values(), out);
    benchmark::ClobberMemory();
  }
}

}  // namespace

BENCHMARK(BM_Dot)->Arg(256)->Arg(1024)->Arg(2048);
BENCHMARK(BM_DotSerial)->Arg(256)->Arg(1024)->Arg(2048);
BENCHMARK(BM_LocalSums)->Arg(256)->Arg(1024)->Arg(2048);
BENCHMARK(BM_LocalSumsSerial)->Arg(256)->Arg(1024)->Arg(2048);
BENCHMARK(BM_Residual)->Arg(256)->Arg(1024)->Arg(2048);
BENCHMARK(BM_ResidualSerial)->Arg(256)->Arg(1024)->Arg(2048);
BENCHMARK(BM_StepReflect)->Arg(256)->Arg(1024)->Arg(2048);
BENCHMARK(BM_StepReflectSerial)->Arg(256)->Arg(1024)->Arg(2048);
BENCHMARK(BM_HalfLaplacian)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HalfLaplacianPadded)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Riesz)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
