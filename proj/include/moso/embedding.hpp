//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "moso/design.hpp"

namespace moso {

/// Coordinates of a point in the normalized latent cube [0,1]^l.
using LatentPoint = std::vector<double>;

/// Hidden embedding layer between the mixed design space and [0,1]^l.
///
/// Layout: every non-categorical variable gets its own block in declaration
/// order (one coordinate, or `width()` coordinates for custom embedders);
/// all categorical variables share one trailing block that encodes their
/// joint combination. With K joint combinations (row-major over the
/// categorical variables in declaration order) the block has K-1
/// coordinates: combination 0 maps to the origin and combination j >= 1 to
/// the unit vector e_j. Any two coordinates of that block are therefore never
/// nonzero together.
class EmbeddingPlan {
public:
  enum class Rule { continuous_rescale, integer_rescale, custom, categorical_joint };

  struct Block {
    std::size_t variable; // index into the design space
    Rule rule;
    std::size_t offset;   // first latent coordinate
    std::size_t width;
  };

  explicit EmbeddingPlan(std::shared_ptr<const DesignSpace> space);

  std::size_t latent_dim() const noexcept { return latent_dim_; }
  /// Number of joint categorical combinations K (1 when there are none).
  std::size_t categorical_combo_count() const noexcept { return combo_count_; }
  /// Offset of the categorical block; equal to latent_dim() when K == 1.
  std::size_t categorical_offset() const noexcept { return cat_offset_; }
  const std::vector<Block> &blocks() const noexcept { return blocks_; }
  const std::vector<std::size_t> &categorical_variables() const noexcept { return cat_vars_; }
  const std::shared_ptr<const DesignSpace> &space() const noexcept { return space_; }

  /// Throws Error on out-of-bounds values or unknown levels.
  LatentPoint embed(const DesignPoint &x) const;
  /// Coordinates outside [0,1] by more than 1e-9 are clamped with a warning.
  DesignPoint extract(std::span<const double> z) const;

  /// Derivative of each design value with respect to its own latent
  /// coordinate (0 for categorical and custom variables, whose extraction is
  /// piecewise constant or opaque).
  std::vector<double> design_scale() const;

  /// Joint combination index of the categorical values of `x`.
  std::size_t combination_index(const DesignPoint &x) const;

private:
  std::shared_ptr<const DesignSpace> space_;
  std::vector<Block> blocks_;
  std::vector<std::size_t> cat_vars_;
  std::vector<std::size_t> strides_; // row-major strides per categorical variable
  std::size_t combo_count_ = 1;
  std::size_t cat_offset_ = 0;
  std::size_t latent_dim_ = 0;
};

/// The latent search box ([0]*l, [1]*l).
std::pair<LatentPoint, LatentPoint> latent_box(const EmbeddingPlan &plan);

} // namespace moso
