//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/search.hpp"

#include <cmath>

namespace moso {

std::vector<LatentPoint> lhs_search(std::size_t count, std::size_t dim, Rng &rng) {
  std::vector<LatentPoint> pts(count, LatentPoint(dim, 0.0));
  const double n = static_cast<double>(count);
  for (std::size_t d = 0; d < dim; ++d) {
    const auto strata = permutation(rng, count);
    for (std::size_t i = 0; i < count; ++i) {
      const double k = static_cast<double>(strata[i]);
      double c = (k + uniform01(rng)) / n;
      // k + u can round up to k + 1; keep the coordinate inside its stratum.
      while (std::floor(c * n) > k)
        c = std::nextafter(c, 0.0);
      pts[i][d] = c;
    }
  }
  return pts;
}

} // namespace moso
