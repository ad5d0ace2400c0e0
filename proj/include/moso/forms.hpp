//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "moso/problem.hpp"

// Common algebraic objective/constraint forms with exact gradients. Output
// indices refer to the concatenated simulation output vector, variable
// indices to the design space.

namespace moso::forms {

struct LinearTerms {
  std::vector<std::pair<std::size_t, double>> outputs;
  std::vector<std::pair<std::size_t, double>> design;
  double constant = 0.0;
};

/// constant + sum c_i s_i + sum d_k x_k (categorical values contribute their level index).
ObjectiveSpec linear(std::string name, LinearTerms terms);

/// s_i.
ObjectiveSpec identity(std::string name, std::size_t output);

/// x_k.
ObjectiveSpec design_value(std::string name, std::size_t variable);

/// sum_{i in outputs} s_i^2 - offset.
ObjectiveSpec sum_of_squares(std::string name, std::vector<std::size_t> outputs,
                             double offset = 0.0);

} // namespace moso::forms
