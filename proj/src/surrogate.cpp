//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace moso {

namespace {

constexpr double kNuggetScale = 1e-8;
constexpr int kRefinementSteps = 8;
// Target residual relative to (1 + |y|), with headroom below the 1e-6 contract.
constexpr double kInterpolationTol = 1e-7;
constexpr int kImproveTries = 100;
constexpr int kUniformTries = 1000;

double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

double max_norm(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

double distance(std::span<const double> a, std::span<const double> b, TrustRegionNorm norm) {
  return norm == TrustRegionNorm::max ? max_norm(a, b) : euclidean(a, b);
}

} // namespace

double TrustRegion::lower(std::size_t k) const { return std::max(0.0, center[k] - radius); }
double TrustRegion::upper(std::size_t k) const { return std::min(1.0, center[k] + radius); }

bool TrustRegion::contains(std::span<const double> z, double tol) const {
  for (std::size_t k = 0; k < z.size(); ++k)
    if (z[k] < lower(k) - tol || z[k] > upper(k) + tol)
      return false;
  return true;
}

std::optional<TrustRegion> trust_region_at(std::span<const double> center,
                                           const std::vector<LatentPoint> &data,
                                           std::size_t neighbors, TrustRegionNorm norm) {
  std::vector<double> d;
  d.reserve(data.size());
  bool skipped_self = false;
  for (const auto &p : data) {
    const double r = distance(center, p, norm);
    if (r == 0.0 && !skipped_self) {
      skipped_self = true;
      continue;
    }
    d.push_back(r);
  }
  if (neighbors == 0 || d.size() < neighbors)
    return std::nullopt;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(neighbors - 1), d.end());
  return TrustRegion{LatentPoint(center.begin(), center.end()), d[neighbors - 1]};
}

RbfSurrogate RbfSurrogate::fit(const std::vector<LatentPoint> &centers,
                               const std::vector<std::vector<double>> &values, SurrogateMode mode) {
  if (centers.empty())
    throw Error("RBF fit: no data");
  if (values.size() != centers.size())
    throw Error("RBF fit: centers and values differ in length");
  const std::size_t n = centers.size();
  const std::size_t dim = centers.front().size();
  const std::size_t m = values.front().size();
  if (m == 0)
    throw Error("RBF fit: empty output vectors");
  {
    std::set<std::vector<double>> seen;
    for (const auto &c : centers) {
      if (c.size() != dim)
        throw Error("RBF fit: centers have inconsistent dimension");
      if (!seen.insert(c).second)
        throw Error("RBF fit: duplicate centers");
    }
  }

  RbfSurrogate s;
  s.mode_ = mode;
  s.centers_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k)
      s.centers_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = centers[i][k];

  Eigen::MatrixXd Y(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i].size() != m)
      throw Error("RBF fit: output vectors have inconsistent length");
    for (std::size_t j = 0; j < m; ++j)
      Y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i][j];
  }
  s.mean_.resize(m);
  s.stddev_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto col = Y.col(static_cast<Eigen::Index>(j));
    const double mu = col.mean();
    s.mean_[j] = mu;
    s.stddev_[j] = std::sqrt((col.array() - mu).square().mean());
    Y.col(static_cast<Eigen::Index>(j)).array() -= mu;
  }

  double mean_nn = 1.0;
  if (n > 1) {
    const auto nn = kernels::nearest_neighbor_distances(s.centers_);
    mean_nn = std::accumulate(nn.begin(), nn.end(), 0.0) / static_cast<double>(n);
  }
  s.eps_ = 1.0 / (std::sqrt(2.0) * mean_nn);

  const Eigen::MatrixXd K0 = kernels::gaussian_kernel_matrix(s.centers_, s.eps_);
  Eigen::MatrixXd K = K0;
  s.nugget_ = kNuggetScale * K.trace() / static_cast<double>(n);
  K.diagonal().array() += s.nugget_;
  s.factor_.compute(K);
  if (s.factor_.info() != Eigen::Success) {
    std::ostringstream os;
    os << "RBF fit: regularized kernel matrix is singular (reciprocal condition estimate "
       << s.factor_.rcond() << ")";
    throw NumericalError(os.str());
  }
  s.coeffs_ = s.factor_.solve(Y);
  // The nugget leaves a residual of nugget * coeffs at the centers. When that
  // exceeds the interpolation tolerance, refine against the bare kernel until
  // it does not; well-conditioned fits keep the regularized solution.
  Eigen::MatrixXd scale = Y;
  for (std::size_t j = 0; j < m; ++j)
    scale.col(static_cast<Eigen::Index>(j)).array() =
        kInterpolationTol * (1.0 + (Y.col(static_cast<Eigen::Index>(j)).array() + s.mean_[j]).abs());
  auto excess = [&](const Eigen::MatrixXd &c) {
    return ((Y - K0 * c).cwiseAbs().array() / scale.array()).maxCoeff();
  };
  double prev = excess(s.coeffs_);
  for (int it = 0; it < kRefinementSteps && prev > 1.0; ++it) {
    const Eigen::MatrixXd next = s.coeffs_ + s.factor_.solve(Y - K0 * s.coeffs_);
    const double e = excess(next);
    if (!(e < prev))
      break;
    s.coeffs_ = next;
    prev = e;
  }
  if (!s.coeffs_.allFinite())
    throw NumericalError("RBF fit: non-finite coefficients");
  return s;
}

RbfSurrogate::Evaluation RbfSurrogate::evaluate_cached(std::span<const double> z) const {
  const Eigen::Index n = centers_.rows();
  const Eigen::Index dim = centers_.cols();
  const double eps2 = eps_ * eps_;
  Evaluation e;
  e.kernel.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double r2 = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double d = z[static_cast<std::size_t>(k)] - centers_(i, k);
      r2 += d * d;
    }
    e.kernel[static_cast<std::size_t>(i)] = std::exp(-eps2 * r2);
  }
  const Eigen::Map<const Eigen::VectorXd> kv(e.kernel.data(), n);
  const Eigen::VectorXd v = coeffs_.transpose() * kv;
  e.value.resize(mean_.size());
  for (std::size_t j = 0; j < mean_.size(); ++j)
    e.value[j] = mean_[j] + v(static_cast<Eigen::Index>(j));
  return e;
}

std::vector<double> RbfSurrogate::evaluate(std::span<const double> z) const {
  return evaluate_cached(z).value;
}

Eigen::MatrixXd RbfSurrogate::gradient(std::span<const double> z) const {
  const auto e = evaluate_cached(z);
  const Eigen::Index n = centers_.rows();
  const Eigen::Index dim = centers_.cols();
  const double eps2 = eps_ * eps_;
  // dphi_k/dz = -2 eps^2 (z - c_k) phi_k
  Eigen::MatrixXd dphi(n, dim);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < dim; ++k)
      dphi(i, k) = -2.0 * eps2 * (z[static_cast<std::size_t>(k)] - centers_(i, k)) *
                   e.kernel[static_cast<std::size_t>(i)];
  return coeffs_.transpose() * dphi;
}

std::vector<double> RbfSurrogate::vjp(std::span<const double> z, const Evaluation &eval,
                                      std::span<const double> w) const {
  const Eigen::Index n = centers_.rows();
  const Eigen::Index dim = centers_.cols();
  const double eps2 = eps_ * eps_;
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  const Eigen::VectorXd a = coeffs_ * wv;
  std::vector<double> g(static_cast<std::size_t>(dim), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale = -2.0 * eps2 * a(i) * eval.kernel[static_cast<std::size_t>(i)];
    if (scale == 0.0)
      continue;
    for (Eigen::Index k = 0; k < dim; ++k)
      g[static_cast<std::size_t>(k)] += scale * (z[static_cast<std::size_t>(k)] - centers_(i, k));
  }
  return g;
}

std::vector<double> RbfSurrogate::uncertainty(std::span<const double> z) const {
  const auto e = evaluate_cached(z);
  const Eigen::Map<const Eigen::VectorXd> kv(e.kernel.data(), centers_.rows());
  const double var = std::max(0.0, 1.0 - kv.dot(factor_.solve(kv)));
  std::vector<double> out(stddev_.size());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = var * stddev_[j];
  return out;
}

TrustRegion RbfSurrogate::set_center(std::span<const double> center,
                                     const std::vector<LatentPoint> &data,
                                     const std::vector<std::vector<double>> &values,
                                     std::size_t neighbors, TrustRegionNorm norm) {
  auto region = trust_region_at(center, data, neighbors, norm);
  if (!region) {
    region = TrustRegion{LatentPoint(center.begin(), center.end()), 1.0};
    mode_ = SurrogateMode::global;
    region_ = region;
    return *region;
  }
  if (mode_ == SurrogateMode::local) {
    const double window = 2.0 * region->radius;
    std::vector<LatentPoint> local_pts;
    std::vector<std::vector<double>> local_vals;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (distance(center, data[i], norm) <= window) {
        local_pts.push_back(data[i]);
        local_vals.push_back(values[i]);
      }
    }
    *this = fit(local_pts, local_vals, SurrogateMode::local);
  }
  region_ = region;
  return *region;
}

LatentPoint improvement_point(const TrustRegion &region, const std::vector<LatentPoint> &data,
                              Rng &rng, const std::function<bool(const LatentPoint &)> &is_dup) {
  const std::size_t dim = region.center.size();
  auto duplicate = [&](const LatentPoint &z) {
    if (is_dup)
      return is_dup(z);
    return std::find(data.begin(), data.end(), z) != data.end();
  };
  auto uniform_in = [&](bool whole_cube) {
    LatentPoint z(dim);
    for (std::size_t k = 0; k < dim; ++k)
      z[k] = whole_cube ? uniform01(rng) : uniform(rng, region.lower(k), region.upper(k));
    return z;
  };

  if (!(region.radius > 0.0)) {
    LatentPoint z = uniform_in(true);
    for (int t = 0; t < kUniformTries && duplicate(z); ++t)
      z = uniform_in(true);
    return z;
  }

  std::vector<const LatentPoint *> pts;
  for (const auto &p : data)
    if (region.contains(p))
      pts.push_back(&p);
  if (pts.size() < dim + 1) {
    pts.clear();
    for (const auto &p : data)
      pts.push_back(&p);
  }

  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                                    static_cast<Eigen::Index>(dim));
  Eigen::VectorXd sigma = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim));
  if (pts.size() >= 2) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    for (const auto *p : pts)
      mu += Eigen::Map<const Eigen::VectorXd>(p->data(), static_cast<Eigen::Index>(dim));
    mu /= static_cast<double>(pts.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (const auto *p : pts) {
      const Eigen::VectorXd d =
          Eigen::Map<const Eigen::VectorXd>(p->data(), static_cast<Eigen::Index>(dim)) - mu;
      cov.noalias() += d * d.transpose();
    }
    cov /= static_cast<double>(pts.size() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() == Eigen::Success) {
      basis = es.eigenvectors();
      for (Eigen::Index j = 0; j < sigma.size(); ++j)
        sigma(j) = 1.0 / (std::max(es.eigenvalues()(j), 0.0) + 1e-8);
      sigma /= sigma.maxCoeff();
    }
  }

  for (int t = 0; t < kImproveTries; ++t) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(dim));
    for (Eigen::Index j = 0; j < g.size(); ++j)
      g(j) = sigma(j) * normal01(rng);
    const Eigen::VectorXd step = region.radius * (basis * g);
    LatentPoint z(dim);
    for (std::size_t k = 0; k < dim; ++k)
      z[k] = std::clamp(region.center[k] + step(static_cast<Eigen::Index>(k)), region.lower(k),
                        region.upper(k));
    if (!duplicate(z))
      return z;
  }
  LatentPoint z = uniform_in(false);
  for (int t = 0; t < kUniformTries && duplicate(z); ++t)
    z = uniform_in(false);
  return z;
}

} // namespace moso
