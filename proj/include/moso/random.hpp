//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace moso {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream); streams are numbered by the
/// caller (search, one per acquisition, ...).
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

// The helpers below only consume raw engine output, so sequences are the same
// for every standard library. std:: distributions are avoided on purpose.

/// Uniform on [0, 1) with 53 random bits.
double uniform01(Rng &rng);
double uniform(Rng &rng, double lo, double hi);
/// Uniform integer in [0, n).
std::size_t uniform_index(Rng &rng, std::size_t n);
/// Standard normal (Box-Muller, no cached second variate).
double normal01(Rng &rng);
/// Exponential with rate 1.
double exponential1(Rng &rng);
/// Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> permutation(Rng &rng, std::size_t n);

std::string serialize_rng(const Rng &rng);
/// Throws Error on malformed input.
Rng deserialize_rng(const std::string &state);

} // namespace moso
