//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/forms.hpp"

#include <memory>

namespace moso::forms {

ObjectiveSpec linear(std::string name, LinearTerms terms) {
  auto t = std::make_shared<const LinearTerms>(std::move(terms));
  ObjectiveSpec spec;
  spec.name = std::move(name);
  spec.func = [t](const DesignPoint &x, std::span<const double> s) {
    double v = t->constant;
    for (const auto &[i, c] : t->outputs)
      v += c * s[i];
    for (const auto &[k, d] : t->design)
      v += d * x[k];
    return v;
  };
  spec.grad = [t](const DesignPoint &x, std::span<const double> s) {
    AlgebraicGradient g{std::vector<double>(x.size(), 0.0), std::vector<double>(s.size(), 0.0)};
    for (const auto &[i, c] : t->outputs)
      g.ds[i] += c;
    for (const auto &[k, d] : t->design)
      g.dx[k] += d;
    return g;
  };
  return spec;
}

ObjectiveSpec identity(std::string name, std::size_t output) {
  return linear(std::move(name), {{{output, 1.0}}, {}, 0.0});
}

ObjectiveSpec design_value(std::string name, std::size_t variable) {
  return linear(std::move(name), {{}, {{variable, 1.0}}, 0.0});
}

ObjectiveSpec sum_of_squares(std::string name, std::vector<std::size_t> outputs, double offset) {
  auto idx = std::make_shared<const std::vector<std::size_t>>(std::move(outputs));
  ObjectiveSpec spec;
  spec.name = std::move(name);
  spec.func = [idx, offset](const DesignPoint &, std::span<const double> s) {
    double v = 0.0;
    for (std::size_t i : *idx)
      v += s[i] * s[i];
    return v - offset;
  };
  spec.grad = [idx](const DesignPoint &x, std::span<const double> s) {
    AlgebraicGradient g{std::vector<double>(x.size(), 0.0), std::vector<double>(s.size(), 0.0)};
    for (std::size_t i : *idx)
      g.ds[i] += 2.0 * s[i];
    return g;
  };
  return spec;
}

} // namespace moso::forms
