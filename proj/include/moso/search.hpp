//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <vector>

#include "moso/embedding.hpp"
#include "moso/random.hpp"

namespace moso {

/// Jittered Latin hypercube design of `count` points in [0,1)^dim.
///
/// Along every axis the points occupy the strata [k/count, (k+1)/count) once
/// each; the stratum order is an independent permutation per axis.
std::vector<LatentPoint> lhs_search(std::size_t count, std::size_t dim, Rng &rng);

} // namespace moso
