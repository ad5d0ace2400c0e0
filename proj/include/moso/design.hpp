//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "moso/error.hpp"

namespace moso {

enum class VariableKind { continuous, integer, categorical, custom };

std::string_view to_string(VariableKind kind);

/// User-supplied embedder/extractor pair for a single scalar variable.
///
/// The framework checks that `embed` lands in [0,1]^width and that
/// `extract(embed(v)) == v` every time a value passes through it.
class CustomEmbedder {
public:
  virtual ~CustomEmbedder() = default;
  virtual std::size_t width() const = 0;
  virtual std::vector<double> embed(double value) const = 0;
  virtual double extract(std::span<const double> latent) const = 0;
  /// Whether `value` is a legal design value for this variable.
  virtual bool contains(double value) const = 0;
};

struct DesignVariable {
  std::string name;
  VariableKind kind = VariableKind::continuous;
  double lower = 0.0;
  double upper = 1.0;
  std::vector<std::string> levels;
  std::shared_ptr<const CustomEmbedder> embedder;

  static DesignVariable continuous(std::string name, double lower, double upper);
  static DesignVariable integer(std::string name, double lower, double upper);
  static DesignVariable categorical(std::string name, std::vector<std::string> levels);
  static DesignVariable custom(std::string name, std::shared_ptr<const CustomEmbedder> embedder);
};

/// Validated, immutable list of design variables with name lookup.
class DesignSpace {
public:
  /// Throws ValidationError listing every invalid variable.
  explicit DesignSpace(std::vector<DesignVariable> variables);

  std::size_t size() const noexcept { return variables_.size(); }
  const DesignVariable &operator[](std::size_t i) const { return variables_[i]; }
  const std::vector<DesignVariable> &variables() const noexcept { return variables_; }

  /// Index of the named variable; throws Error when unknown.
  std::size_t index_of(std::string_view name) const;
  bool contains(std::string_view name) const;

  /// Validation messages for a single variable (empty when it is legal).
  static std::vector<std::string> check(const DesignVariable &v);

private:
  std::vector<DesignVariable> variables_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A point of the user's design space.
///
/// Continuous, integer and custom variables store their value; categorical
/// variables store the index of their level.
class DesignPoint {
public:
  DesignPoint() = default;
  DesignPoint(std::shared_ptr<const DesignSpace> space, std::vector<double> values);

  const DesignSpace &space() const { return *space_; }
  const std::shared_ptr<const DesignSpace> &space_ptr() const noexcept { return space_; }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double at(std::size_t i) const { return values_.at(i); }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Numeric value of a named variable (level index for categoricals).
  double operator[](std::string_view name) const;
  double value(std::string_view name) const { return (*this)[name]; }
  /// Level label of a categorical variable.
  const std::string &label(std::string_view name) const;
  const std::string &label(std::size_t i) const;

  /// True when every value is inside its bounds/levels.
  bool legal() const;

  friend bool operator==(const DesignPoint &a, const DesignPoint &b) {
    return a.values_ == b.values_;
  }

private:
  std::shared_ptr<const DesignSpace> space_;
  std::vector<double> values_;
};

/// Builds a DesignPoint from labels/values given in declaration order.
/// Categorical entries are looked up by label.
DesignPoint make_point(std::shared_ptr<const DesignSpace> space,
                       const std::vector<std::string> &entries);

} // namespace moso
