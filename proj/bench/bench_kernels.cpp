//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

// Serial reference vs OpenMP kernel, same inputs. Run with
// OMP_NUM_THREADS set to compare thread counts.

#include <chrono>
#include <thread>

#include <benchmark/benchmark.h>

#include "moso/kernels.hpp"
#include "moso/random.hpp"

using namespace moso;
using kernels::PointMatrix;

namespace {

PointMatrix points(std::int64_t n, std::int64_t d) {
  Rng rng = make_stream(1, 0);
  PointMatrix p(n, d);
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t k = 0; k < d; ++k)
      p(i, k) = uniform01(rng);
  return p;
}

std::vector<std::vector<double>> sphere_front(std::size_t n) {
  Rng rng = make_stream(2, 0);
  std::vector<std::vector<double>> f;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(5);
    double s = 0;
    for (auto &x : v) {
      x = normal01(rng);
      x = std::abs(x);
      s += x * x;
    }
    for (auto &x : v)
      x /= std::sqrt(s);
    f.push_back(v);
  }
  return f;
}

void BM_KernelMatrix(benchmark::State &state) {
  const auto c = points(state.range(0), 13);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::gaussian_kernel_matrix(c, 2.0));
}
void BM_KernelMatrixSerial(benchmark::State &state) {
  const auto c = points(state.range(0), 13);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::gaussian_kernel_matrix_serial(c, 2.0));
}

void BM_NearestNeighbor(benchmark::State &state) {
  const auto c = points(state.range(0), 13);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::nearest_neighbor_distances(c));
}
void BM_NearestNeighborSerial(benchmark::State &state) {
  const auto c = points(state.range(0), 13);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::nearest_neighbor_distances_serial(c));
}

void BM_DominatedCount(benchmark::State &state) {
  const auto f = sphere_front(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> lo(5, 0.0), ref(5, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::dominated_sample_count(f, lo, ref, 200000, 7));
}
void BM_DominatedCountSerial(benchmark::State &state) {
  const auto f = sphere_front(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> lo(5, 0.0), ref(5, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::dominated_sample_count_serial(f, lo, ref, 200000, 7));
}

// 16 tasks sleeping 2 ms each: the pool overlaps them even on one core.
void BM_TaskPool(benchmark::State &state) {
  const auto w = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    kernels::for_each_task(16, w, [](std::size_t) {
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    });
}
void BM_TaskPoolSerial(benchmark::State &state) {
  for (auto _ : state)
    kernels::for_each_task_serial(16, [](std::size_t) {
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    });
}

} // namespace

BENCHMARK(BM_KernelMatrix)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelMatrixSerial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestNeighbor)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestNeighborSerial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DominatedCount)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DominatedCountSerial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TaskPool)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TaskPoolSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
