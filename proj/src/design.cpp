//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/design.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace moso {

ValidationError::ValidationError(std::vector<std::string> errors)
    : Error([&] {
        std::ostringstream os;
        os << "validation failed";
        for (const auto &e : errors)
          os << "; " << e;
        return os.str();
      }()),
      errors_(std::move(errors)) {}

bool ValidationError::mentions(const std::string &needle) const {
  for (const auto &e : errors_)
    if (e.find(needle) != std::string::npos)
      return true;
  return false;
}

std::string_view to_string(VariableKind kind) {
  switch (kind) {
  case VariableKind::continuous:
    return "continuous";
  case VariableKind::integer:
    return "integer";
  case VariableKind::categorical:
    return "categorical";
  case VariableKind::custom:
    return "custom";
  }
  return "unknown";
}

DesignVariable DesignVariable::continuous(std::string name, double lower, double upper) {
  return {std::move(name), VariableKind::continuous, lower, upper, {}, nullptr};
}

DesignVariable DesignVariable::integer(std::string name, double lower, double upper) {
  return {std::move(name), VariableKind::integer, lower, upper, {}, nullptr};
}

DesignVariable DesignVariable::categorical(std::string name, std::vector<std::string> levels) {
  return {std::move(name), VariableKind::categorical, 0.0, 0.0, std::move(levels), nullptr};
}

DesignVariable DesignVariable::custom(std::string name,
                                      std::shared_ptr<const CustomEmbedder> embedder) {
  return {std::move(name), VariableKind::custom, 0.0, 0.0, {}, std::move(embedder)};
}

std::vector<std::string> DesignSpace::check(const DesignVariable &v) {
  std::vector<std::string> errs;
  const std::string who = "variable '" + v.name + "': ";
  if (v.name.empty())
    errs.push_back("variable with empty name");
  switch (v.kind) {
  case VariableKind::continuous:
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper))
      errs.push_back(who + "bounds must be finite");
    else if (!(v.lower < v.upper))
      errs.push_back(who + "bounds inverted or degenerate");
    break;
  case VariableKind::integer:
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper))
      errs.push_back(who + "bounds must be finite");
    else if (v.lower > v.upper)
      errs.push_back(who + "bounds inverted or degenerate");
    else if (v.lower != std::round(v.lower) || v.upper != std::round(v.upper))
      errs.push_back(who + "integer bounds must be integral");
    break;
  case VariableKind::categorical: {
    if (v.levels.size() < 2)
      errs.push_back(who + "categorical with < 2 levels");
    std::set<std::string> seen(v.levels.begin(), v.levels.end());
    if (seen.size() != v.levels.size())
      errs.push_back(who + "duplicate level labels");
    break;
  }
  case VariableKind::custom:
    if (!v.embedder)
      errs.push_back(who + "custom variable without embedder");
    else if (v.embedder->width() == 0)
      errs.push_back(who + "custom embedder with zero latent width");
    break;
  }
  return errs;
}

DesignSpace::DesignSpace(std::vector<DesignVariable> variables)
    : variables_(std::move(variables)) {
  std::vector<std::string> errs;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    auto e = check(variables_[i]);
    errs.insert(errs.end(), e.begin(), e.end());
    if (!index_.emplace(variables_[i].name, i).second)
      errs.push_back("duplicate names: variable '" + variables_[i].name + "'");
  }
  if (!errs.empty())
    throw ValidationError(std::move(errs));
}

std::size_t DesignSpace::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    throw Error("unknown design variable '" + std::string(name) + "'");
  return it->second;
}

bool DesignSpace::contains(std::string_view name) const {
  return index_.count(std::string(name)) != 0;
}

DesignPoint::DesignPoint(std::shared_ptr<const DesignSpace> space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_ || values_.size() != space_->size())
    throw Error("design point size does not match its design space");
}

double DesignPoint::operator[](std::string_view name) const {
  return values_[space_->index_of(name)];
}

const std::string &DesignPoint::label(std::size_t i) const {
  const auto &v = (*space_)[i];
  if (v.kind != VariableKind::categorical)
    throw Error("variable '" + v.name + "' is not categorical");
  return v.levels.at(static_cast<std::size_t>(values_[i]));
}

const std::string &DesignPoint::label(std::string_view name) const {
  return label(space_->index_of(name));
}

bool DesignPoint::legal() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const auto &v = (*space_)[i];
    const double x = values_[i];
    if (!std::isfinite(x))
      return false;
    switch (v.kind) {
    case VariableKind::continuous:
      if (x < v.lower || x > v.upper)
        return false;
      break;
    case VariableKind::integer:
      if (x < v.lower || x > v.upper || x != std::round(x))
        return false;
      break;
    case VariableKind::categorical:
      if (x < 0 || x != std::round(x) || x >= static_cast<double>(v.levels.size()))
        return false;
      break;
    case VariableKind::custom:
      if (!v.embedder->contains(x))
        return false;
      break;
    }
  }
  return true;
}

DesignPoint make_point(std::shared_ptr<const DesignSpace> space,
                       const std::vector<std::string> &entries) {
  if (entries.size() != space->size())
    throw Error("make_point: expected " + std::to_string(space->size()) + " entries");
  std::vector<double> values(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto &v = (*space)[i];
    if (v.kind == VariableKind::categorical) {
      auto it = std::find(v.levels.begin(), v.levels.end(), entries[i]);
      if (it == v.levels.end())
        throw Error("unknown level label '" + entries[i] + "' for variable '" + v.name + "'");
      values[i] = static_cast<double>(it - v.levels.begin());
    } else {
      values[i] = std::stod(entries[i]);
    }
  }
  return DesignPoint(std::move(space), std::move(values));
}

} // namespace moso
