//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "moso/error.hpp"

namespace moso {

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6d6f736fu};
  return Rng(seq);
}

double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(Rng &rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::size_t uniform_index(Rng &rng, std::size_t n) {
  if (n == 0)
    return 0;
  auto k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
  return k < n ? k : n - 1;
}

double normal01(Rng &rng) {
  const double u1 = 1.0 - uniform01(rng); // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double exponential1(Rng &rng) { return -std::log(1.0 - uniform01(rng)); }

std::vector<std::size_t> permutation(Rng &rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i)
    std::swap(p[i - 1], p[uniform_index(rng, i)]);
  return p;
}

std::string serialize_rng(const Rng &rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

Rng deserialize_rng(const std::string &state) {
  std::istringstream is(state);
  Rng rng;
  is >> rng;
  if (is.fail())
    throw Error("malformed generator state");
  return rng;
}

} // namespace moso
