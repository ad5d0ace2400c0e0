//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "moso/random.hpp"

namespace moso::kernels {

namespace {

inline double squared_distance(const PointMatrix &p, Eigen::Index i, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < p.cols(); ++k) {
    const double d = p(i, k) - p(j, k);
    s += d * d;
  }
  return s;
}

inline void kernel_row(const PointMatrix &c, double eps2, Eigen::Index i, Eigen::MatrixXd &K) {
  K(i, i) = 1.0;
  for (Eigen::Index j = i + 1; j < c.rows(); ++j) {
    const double v = std::exp(-eps2 * squared_distance(c, i, j));
    K(i, j) = v;
    K(j, i) = v;
  }
}

inline double nn_distance(const PointMatrix &p, Eigen::Index i) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < p.rows(); ++j)
    if (j != i)
      best = std::min(best, squared_distance(p, i, j));
  return std::sqrt(best);
}

constexpr std::uint64_t kChunk = 1 << 14;

std::uint64_t count_chunk(const std::vector<std::vector<double>> &front,
                          std::span<const double> lower, std::span<const double> ref,
                          std::uint64_t begin, std::uint64_t end, std::uint64_t seed,
                          std::uint64_t chunk) {
  Rng rng = make_stream(seed, chunk);
  const std::size_t o = ref.size();
  std::vector<double> y(o);
  std::uint64_t hits = 0;
  for (std::uint64_t s = begin; s < end; ++s) {
    for (std::size_t k = 0; k < o; ++k)
      y[k] = lower[k] + (ref[k] - lower[k]) * uniform01(rng);
    for (const auto &f : front) {
      bool dom = true;
      for (std::size_t k = 0; k < o && dom; ++k)
        dom = f[k] <= y[k];
      if (dom) {
        ++hits;
        break;
      }
    }
  }
  return hits;
}

} // namespace

Eigen::MatrixXd gaussian_kernel_matrix(const PointMatrix &centers, double eps) {
  const Eigen::Index n = centers.rows();
  Eigen::MatrixXd K(n, n);
  const double eps2 = eps * eps;
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index i = 0; i < n; ++i)
    kernel_row(centers, eps2, i, K);
  return K;
}

Eigen::MatrixXd gaussian_kernel_matrix_serial(const PointMatrix &centers, double eps) {
  const Eigen::Index n = centers.rows();
  Eigen::MatrixXd K(n, n);
  const double eps2 = eps * eps;
  for (Eigen::Index i = 0; i < n; ++i)
    kernel_row(centers, eps2, i, K);
  return K;
}

std::vector<double> nearest_neighbor_distances(const PointMatrix &points) {
  const Eigen::Index n = points.rows();
  std::vector<double> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = nn_distance(points, i);
  return out;
}

std::vector<double> nearest_neighbor_distances_serial(const PointMatrix &points) {
  const Eigen::Index n = points.rows();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = nn_distance(points, i);
  return out;
}

void for_each_task(std::size_t count, std::size_t workers,
                   const std::function<void(std::size_t)> &task) {
  if (workers <= 1 || count <= 1) {
    for_each_task_serial(count, task);
    return;
  }
  const int threads = static_cast<int>(std::min(workers, count));
  const auto n = static_cast<long long>(count);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i)
    task(static_cast<std::size_t>(i));
}

void for_each_task_serial(std::size_t count, const std::function<void(std::size_t)> &task) {
  for (std::size_t i = 0; i < count; ++i)
    task(i);
}

std::uint64_t dominated_sample_count(const std::vector<std::vector<double>> &front,
                                     std::span<const double> lower, std::span<const double> ref,
                                     std::uint64_t samples, std::uint64_t seed) {
  const auto chunks = static_cast<long long>((samples + kChunk - 1) / kChunk);
  std::uint64_t hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (long long c = 0; c < chunks; ++c) {
    const auto begin = static_cast<std::uint64_t>(c) * kChunk;
    const auto end = std::min(samples, begin + kChunk);
    hits += count_chunk(front, lower, ref, begin, end, seed, static_cast<std::uint64_t>(c));
  }
  return hits;
}

std::uint64_t dominated_sample_count_serial(const std::vector<std::vector<double>> &front,
                                            std::span<const double> lower,
                                            std::span<const double> ref, std::uint64_t samples,
                                            std::uint64_t seed) {
  std::uint64_t hits = 0;
  for (std::uint64_t begin = 0, c = 0; begin < samples; begin += kChunk, ++c)
    hits += count_chunk(front, lower, ref, begin, std::min(samples, begin + kChunk), seed, c);
  return hits;
}

} // namespace moso::kernels
