//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "moso/database.hpp"

namespace moso {

/// a dominates b: a <= b componentwise with a < b somewhere.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Indices (ascending) of the nondominated vectors. Of several identical
/// vectors only the first occurrence is kept.
std::vector<std::size_t> nondominated_filter(const std::vector<std::vector<double>> &points);

struct ArchiveEntry {
  DesignPoint x;
  std::vector<double> objectives;
  std::size_t record = 0; // index into the database
};

/// Nondominated feasible records of a database.
class ParetoArchive {
public:
  ParetoArchive() = default;
  /// Uses the first `prefix` records (all when nullopt).
  explicit ParetoArchive(const EvaluationDatabase &db, std::optional<std::size_t> prefix = {});

  const std::vector<ArchiveEntry> &entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::vector<std::vector<double>> objectives() const;

private:
  std::vector<ArchiveEntry> entries_;
};

/// Samples used by the Monte Carlo fallback for more than four objectives.
inline constexpr std::uint64_t kHypervolumeSamples = 1'000'000;

/// Lebesgue measure of the union of boxes [f_i, ref]. Points not <= ref in
/// every component are dropped. Exact dimension sweep for up to four
/// objectives; seeded Monte Carlo beyond that.
double hypervolume(const std::vector<std::vector<double>> &front, std::span<const double> ref);

/// Exact sweep for any number of objectives (exponential in the dimension).
double hypervolume_exact(const std::vector<std::vector<double>> &front,
                         std::span<const double> ref);

/// Monte Carlo estimate inside the bounding box of the front and `ref`.
double hypervolume_monte_carlo(const std::vector<std::vector<double>> &front,
                               std::span<const double> ref,
                               std::uint64_t samples = kHypervolumeSamples,
                               std::uint64_t seed = 0);

enum class ImprovementMode { relative_to_initial, relative_to_gap };

/// Percentage hypervolume improvement. relative_to_initial divides by the
/// initial volume, relative_to_gap by (hv_max - hv_initial). Throws Error when
/// the denominator is not positive or hv_max is missing.
double pct_hv_improvement(double hv_now, double hv_initial, ImprovementMode mode,
                          std::optional<double> hv_max = {});

} // namespace moso
