#include <benchmark/benchmark.h>

#include "opnorm/munorm.hpp"

using namespace opnorm;

namespace {

TensorElement random_tensor(int n) {
  auto rng = substream(0, "bench_tensor", static_cast<std::uint64_t>(n));
  const auto e = full_space(n, n);
  return tensor_element(e, e, gaussian_matrix(rng, e.dim(), e.dim()));
}

void BM_OperatorNorm(benchmark::State& state) {
  auto rng = substream(0, "bench_opnorm");
  const int n = static_cast<int>(state.range(0));
  const Matrix m = gaussian_matrix(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm(m));
}
BENCHMARK(BM_OperatorNorm)->Arg(4)->Arg(16)->Arg(64);

void BM_MinNorm(benchmark::State& state) {
  const auto t = random_tensor(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(min_norm(t));
}
BENCHMARK(BM_MinNorm)->Arg(2)->Arg(3);

void BM_HaagerupUpper(benchmark::State& state) {
  const auto t = random_tensor(static_cast<int>(state.range(0)));
  HaagerupOptions o;
  o.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(haagerup_upper(t, o).value);
}
BENCHMARK(BM_HaagerupUpper)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_CbNormLevel(benchmark::State& state) {
  const auto f = full_space(2, 2);
  std::vector<Matrix> images;
  for (const Matrix& b : f.basis()) images.push_back(b.transpose());
  const auto u = map_to_full(f, images);
  CbOptions o;
  o.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(level_norm(u, static_cast<int>(state.range(0)), o).value);
}
BENCHMARK(BM_CbNormLevel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_MuUpper(benchmark::State& state) {
  const auto t = random_tensor(2);
  MuOptions o;
  o.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(mu_upper(t, o).value);
}
BENCHMARK(BM_MuUpper)->Unit(benchmark::kMillisecond);

void BM_Gamma2Identity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gamma2_linf(Matrix::Identity(n, n)).value);
}
BENCHMARK(BM_Gamma2Identity)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
