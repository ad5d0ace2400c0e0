//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "moso/embedding.hpp"
#include "moso/kernels.hpp"
#include "moso/problem.hpp"
#include "moso/random.hpp"

namespace moso {

/// Box {z : |z - center|_inf <= radius}, always intersected with [0,1]^l.
struct TrustRegion {
  LatentPoint center;
  double radius = 1.0;

  double lower(std::size_t k) const;
  double upper(std::size_t k) const;
  bool contains(std::span<const double> z, double tol = 0.0) const;
};

/// Radius = distance from `center` to its `neighbors`-th nearest point of
/// `data` (one exact self-match is skipped). nullopt when `data` has too few
/// points.
std::optional<TrustRegion> trust_region_at(std::span<const double> center,
                                           const std::vector<LatentPoint> &data,
                                           std::size_t neighbors,
                                           TrustRegionNorm norm = TrustRegionNorm::euclidean);

/// Gaussian RBF interpolant of a vector-valued simulation on [0,1]^l.
///
/// The model is mean + sum_k C_k exp(-(eps |z - c_k|)^2), where the mean is
/// the column mean of the training outputs, eps = 1/(sqrt(2) * mean
/// nearest-neighbor distance) and the system (K + eta I) C = Y - mean is
/// solved with eta = 1e-8 * trace(K) / N.
class RbfSurrogate {
public:
  /// Per-point cache reused by `vjp`.
  struct Evaluation {
    std::vector<double> kernel; // phi(|z - c_k|) per center
    std::vector<double> value;
  };

  RbfSurrogate() = default;

  /// Throws Error on empty data or duplicate centers, NumericalError when the
  /// regularized kernel matrix is not positive definite.
  static RbfSurrogate fit(const std::vector<LatentPoint> &centers,
                          const std::vector<std::vector<double>> &values,
                          SurrogateMode mode = SurrogateMode::global);

  std::size_t size() const noexcept { return static_cast<std::size_t>(centers_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(centers_.cols()); }
  std::size_t outputs() const noexcept { return mean_.size(); }
  double shape() const noexcept { return eps_; }
  double nugget() const noexcept { return nugget_; }
  SurrogateMode mode() const noexcept { return mode_; }
  const std::optional<TrustRegion> &trust_region() const noexcept { return region_; }
  const Eigen::MatrixXd &coefficients() const noexcept { return coeffs_; }
  const std::vector<double> &mean() const noexcept { return mean_; }

  std::vector<double> evaluate(std::span<const double> z) const;
  Evaluation evaluate_cached(std::span<const double> z) const;
  /// Jacobian (outputs x dim).
  Eigen::MatrixXd gradient(std::span<const double> z) const;
  /// Gradient of w . S(z) with respect to z, reusing `eval` computed at z.
  std::vector<double> vjp(std::span<const double> z, const Evaluation &eval,
                          std::span<const double> w) const;
  /// Power-function variance times the per-output data standard deviation.
  std::vector<double> uncertainty(std::span<const double> z) const;

  /// Computes the trust region around `center` from the nearest-neighbor
  /// rule (pass neighbors = l+1). Expects a model fit on `data`. In local
  /// mode the model is refit on the points within twice the radius (same
  /// norm). With too few points the model switches to global mode and the
  /// region covers the whole cube.
  TrustRegion set_center(std::span<const double> center, const std::vector<LatentPoint> &data,
                         const std::vector<std::vector<double>> &values, std::size_t neighbors,
                         TrustRegionNorm norm = TrustRegionNorm::euclidean);

private:
  kernels::PointMatrix centers_;
  Eigen::MatrixXd coeffs_; // size x outputs
  std::vector<double> mean_;
  std::vector<double> stddev_;
  double eps_ = 1.0;
  double nugget_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  SurrogateMode mode_ = SurrogateMode::global;
  std::optional<TrustRegion> region_;
};

/// Model-improvement sample inside `region`.
///
/// Draws center + radius * sum_j g_j u_j, where u_j are eigenvectors of the
/// covariance of the data inside the region (all data when fewer than l+1
/// points fall inside) and g_j ~ N(0, s_j^2) with s_j proportional to
/// 1/(lambda_j + 1e-8), scaled so max s_j = 1. The draw is clipped to the
/// region; up to 100 draws flagged by `is_duplicate` are rejected before
/// falling back to uniform sampling in the region (the whole cube when the
/// radius is zero).
LatentPoint improvement_point(const TrustRegion &region, const std::vector<LatentPoint> &data,
                              Rng &rng,
                              const std::function<bool(const LatentPoint &)> &is_duplicate = {});

} // namespace moso
