//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

// Data-parallel kernels. Each OpenMP kernel has a `_serial` twin that is the
// reference implementation used by the tests and the benchmark; both produce
// bitwise identical results (no floating-point reductions are reordered).

namespace moso::kernels {

/// Row-major storage of N points in R^d (one point per row).
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// K_ij = exp(-(eps * |c_i - c_j|)^2).
Eigen::MatrixXd gaussian_kernel_matrix(const PointMatrix &centers, double eps);
Eigen::MatrixXd gaussian_kernel_matrix_serial(const PointMatrix &centers, double eps);

/// Euclidean distance from every point to its nearest other point.
std::vector<double> nearest_neighbor_distances(const PointMatrix &points);
std::vector<double> nearest_neighbor_distances_serial(const PointMatrix &points);

/// Runs task(0..count-1) on `workers` threads with dynamic scheduling.
/// Tasks must not throw; callers capture failures themselves.
void for_each_task(std::size_t count, std::size_t workers,
                   const std::function<void(std::size_t)> &task);
void for_each_task_serial(std::size_t count, const std::function<void(std::size_t)> &task);

/// Monte Carlo hit count for the region dominated by `front` inside the box
/// [lower, ref]: number of `samples` uniform draws dominated by some point.
/// Draws come from fixed per-chunk streams derived from `seed`, so the count
/// does not depend on the thread count.
std::uint64_t dominated_sample_count(const std::vector<std::vector<double>> &front,
                                     std::span<const double> lower, std::span<const double> ref,
                                     std::uint64_t samples, std::uint64_t seed);
std::uint64_t dominated_sample_count_serial(const std::vector<std::vector<double>> &front,
                                            std::span<const double> lower,
                                            std::span<const double> ref, std::uint64_t samples,
                                            std::uint64_t seed);

} // namespace moso::kernels
