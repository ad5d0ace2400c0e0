//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "moso/log.hpp"

namespace moso {

namespace {
constexpr double kClampTolerance = 1e-9;
}

EmbeddingPlan::EmbeddingPlan(std::shared_ptr<const DesignSpace> space) : space_(std::move(space)) {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < space_->size(); ++i) {
    const auto &v = (*space_)[i];
    switch (v.kind) {
    case VariableKind::continuous:
      blocks_.push_back({i, Rule::continuous_rescale, offset, 1});
      offset += 1;
      break;
    case VariableKind::integer:
      blocks_.push_back({i, Rule::integer_rescale, offset, 1});
      offset += 1;
      break;
    case VariableKind::custom:
      blocks_.push_back({i, Rule::custom, offset, v.embedder->width()});
      offset += v.embedder->width();
      break;
    case VariableKind::categorical:
      cat_vars_.push_back(i);
      break;
    }
  }
  strides_.assign(cat_vars_.size(), 1);
  for (std::size_t c = cat_vars_.size(); c-- > 0;) {
    strides_[c] = combo_count_;
    combo_count_ *= (*space_)[cat_vars_[c]].levels.size();
  }
  cat_offset_ = offset;
  latent_dim_ = offset + (combo_count_ - 1);
  if (!cat_vars_.empty())
    for (auto c : cat_vars_)
      blocks_.push_back({c, Rule::categorical_joint, cat_offset_, combo_count_ - 1});
  if (latent_dim_ == 0)
    throw ValidationError({"design space has an empty latent embedding"});
}

std::size_t EmbeddingPlan::combination_index(const DesignPoint &x) const {
  std::size_t j = 0;
  for (std::size_t c = 0; c < cat_vars_.size(); ++c)
    j += static_cast<std::size_t>(x[cat_vars_[c]]) * strides_[c];
  return j;
}

LatentPoint EmbeddingPlan::embed(const DesignPoint &x) const {
  if (x.size() != space_->size())
    throw Error("embed: design point has wrong size");
  LatentPoint z(latent_dim_, 0.0);
  for (const auto &b : blocks_) {
    const auto &v = (*space_)[b.variable];
    const double value = x[b.variable];
    switch (b.rule) {
    case Rule::continuous_rescale:
    case Rule::integer_rescale: {
      if (!(value >= v.lower && value <= v.upper))
        throw Error("embed: value " + std::to_string(value) + " of '" + v.name +
                    "' is out of bounds");
      const double span = v.upper - v.lower;
      z[b.offset] = span > 0 ? (value - v.lower) / span : 0.0;
      break;
    }
    case Rule::custom: {
      if (!v.embedder->contains(value))
        throw Error("embed: value of '" + v.name + "' rejected by its custom embedder");
      auto block = v.embedder->embed(value);
      if (block.size() != b.width)
        throw Error("embed: custom embedder for '" + v.name + "' returned wrong width");
      for (double c : block)
        if (!(c >= 0.0 && c <= 1.0))
          throw Error("embed: custom embedder for '" + v.name + "' left [0,1]");
      if (v.embedder->extract(block) != value)
        throw Error("embed: custom embedder for '" + v.name + "' does not round-trip");
      std::copy(block.begin(), block.end(), z.begin() + static_cast<std::ptrdiff_t>(b.offset));
      break;
    }
    case Rule::categorical_joint: {
      if (!(value >= 0 && value == std::round(value) &&
            value < static_cast<double>(v.levels.size())))
        throw Error("embed: unknown level for categorical '" + v.name + "'");
      break;
    }
    }
  }
  if (!cat_vars_.empty()) {
    const std::size_t j = combination_index(x);
    if (j > 0)
      z[cat_offset_ + j - 1] = 1.0;
  }
  return z;
}

DesignPoint EmbeddingPlan::extract(std::span<const double> zin) const {
  if (zin.size() != latent_dim_)
    throw Error("extract: latent point has wrong dimension");
  std::vector<double> z(zin.begin(), zin.end());
  bool clamped = false;
  for (double &c : z) {
    if (c < -kClampTolerance || c > 1.0 + kClampTolerance || std::isnan(c))
      clamped = true;
    c = std::isnan(c) ? 0.0 : std::clamp(c, 0.0, 1.0);
  }
  if (clamped)
    warn("extract: latent coordinate outside [0,1] was clamped");

  std::vector<double> values(space_->size(), 0.0);
  for (const auto &b : blocks_) {
    const auto &v = (*space_)[b.variable];
    switch (b.rule) {
    case Rule::continuous_rescale:
      values[b.variable] = std::clamp(v.lower + z[b.offset] * (v.upper - v.lower), v.lower, v.upper);
      break;
    case Rule::integer_rescale:
      values[b.variable] =
          std::clamp(std::round(v.lower + z[b.offset] * (v.upper - v.lower)), v.lower, v.upper);
      break;
    case Rule::custom:
      values[b.variable] = v.embedder->extract(
          std::span<const double>(z).subspan(b.offset, b.width));
      break;
    case Rule::categorical_joint:
      break;
    }
  }
  if (!cat_vars_.empty()) {
    // Nearest simplex vertex: origin for combination 0, e_j for j >= 1.
    const std::size_t width = combo_count_ - 1;
    double sq = 0.0;
    for (std::size_t k = 0; k < width; ++k)
      sq += z[cat_offset_ + k] * z[cat_offset_ + k];
    std::size_t best = 0;
    double best_d = sq;
    for (std::size_t k = 0; k < width; ++k) {
      const double zk = z[cat_offset_ + k];
      const double d = sq - zk * zk + (1.0 - zk) * (1.0 - zk);
      if (d < best_d) {
        best_d = d;
        best = k + 1;
      }
    }
    for (std::size_t c = 0; c < cat_vars_.size(); ++c) {
      const std::size_t levels = (*space_)[cat_vars_[c]].levels.size();
      values[cat_vars_[c]] = static_cast<double>((best / strides_[c]) % levels);
    }
  }
  return DesignPoint(space_, std::move(values));
}

std::vector<double> EmbeddingPlan::design_scale() const {
  std::vector<double> scale(space_->size(), 0.0);
  for (const auto &b : blocks_) {
    const auto &v = (*space_)[b.variable];
    if (b.rule == Rule::continuous_rescale || b.rule == Rule::integer_rescale)
      scale[b.variable] = v.upper - v.lower;
  }
  return scale;
}

std::pair<LatentPoint, LatentPoint> latent_box(const EmbeddingPlan &plan) {
  return {LatentPoint(plan.latent_dim(), 0.0), LatentPoint(plan.latent_dim(), 1.0)};
}

} // namespace moso
