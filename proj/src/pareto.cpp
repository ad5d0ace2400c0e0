//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/pareto.hpp"

#include <algorithm>
#include <numeric>

#include "moso/kernels.hpp"

namespace moso {

bool dominates(std::span<const double> a, std::span<const double> b) {
  bool strict = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k])
      return false;
    if (a[k] < b[k])
      strict = true;
  }
  return strict;
}

std::vector<std::size_t> nondominated_filter(const std::vector<std::vector<double>> &points) {
  // Sorting lexicographically puts every dominator and every earlier
  // duplicate ahead of the point it eliminates.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    bool drop = false;
    for (std::size_t k : kept) {
      if (points[k] == points[i] || dominates(points[k], points[i])) {
        drop = true;
        break;
      }
    }
    if (!drop)
      kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

ParetoArchive::ParetoArchive(const EvaluationDatabase &db, std::optional<std::size_t> prefix) {
  const std::size_t count = std::min(prefix.value_or(db.size()), db.size());
  std::vector<std::size_t> feasible;
  std::vector<std::vector<double>> objs;
  for (std::size_t i = 0; i < count; ++i) {
    if (db[i].feasible) {
      feasible.push_back(i);
      objs.push_back(db[i].objectives);
    }
  }
  for (std::size_t k : nondominated_filter(objs)) {
    const auto &r = db[feasible[k]];
    entries_.push_back({r.x, r.objectives, feasible[k]});
  }
}

std::vector<std::vector<double>> ParetoArchive::objectives() const {
  std::vector<std::vector<double>> out;
  out.reserve(entries_.size());
  for (const auto &e : entries_)
    out.push_back(e.objectives);
  return out;
}

namespace {

std::vector<std::vector<double>> clip_to_reference(const std::vector<std::vector<double>> &front,
                                                   std::span<const double> ref) {
  std::vector<std::vector<double>> pts;
  for (const auto &f : front) {
    bool inside = f.size() == ref.size();
    for (std::size_t k = 0; k < ref.size() && inside; ++k)
      inside = f[k] <= ref[k];
    if (inside)
      pts.push_back(f);
  }
  return pts;
}

double sweep_2d(std::vector<std::vector<double>> pts, std::span<const double> ref) {
  std::sort(pts.begin(), pts.end(),
            [](const auto &a, const auto &b) { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); });
  double area = 0.0;
  double y_best = ref[1];
  for (const auto &p : pts) {
    if (p[1] < y_best) {
      area += (ref[0] - p[0]) * (y_best - p[1]);
      y_best = p[1];
    }
  }
  return area;
}

// Slices along the last objective: between consecutive levels the cross
// section is the (d-1)-volume dominated by the points at or below the level.
double sweep(std::vector<std::vector<double>> pts, std::span<const double> ref) {
  const std::size_t d = ref.size();
  if (pts.empty())
    return 0.0;
  if (d == 1) {
    double best = ref[0];
    for (const auto &p : pts)
      best = std::min(best, p[0]);
    return ref[0] - best;
  }
  if (d == 2)
    return sweep_2d(std::move(pts), ref);

  std::sort(pts.begin(), pts.end(),
            [d](const auto &a, const auto &b) { return a[d - 1] < b[d - 1]; });
  double volume = 0.0;
  std::vector<std::vector<double>> slice;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<double> proj(pts[i].begin(), pts[i].end() - 1);
    // Points dominated in the projection never change later cross sections.
    bool covered = false;
    for (const auto &s : slice) {
      bool dom = true;
      for (std::size_t k = 0; k + 1 < d && dom; ++k)
        dom = s[k] <= proj[k];
      if (dom) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      std::erase_if(slice, [&](const std::vector<double> &s) {
        for (std::size_t k = 0; k + 1 < d; ++k)
          if (proj[k] > s[k])
            return false;
        return true;
      });
      slice.push_back(std::move(proj));
    }
    const double next = (i + 1 < pts.size()) ? pts[i + 1][d - 1] : ref[d - 1];
    const double height = next - pts[i][d - 1];
    if (height > 0.0)
      volume += height * sweep(slice, ref.first(d - 1));
  }
  return volume;
}

} // namespace

double hypervolume_exact(const std::vector<std::vector<double>> &front,
                         std::span<const double> ref) {
  return sweep(clip_to_reference(front, ref), ref);
}

double hypervolume_monte_carlo(const std::vector<std::vector<double>> &front,
                               std::span<const double> ref, std::uint64_t samples,
                               std::uint64_t seed) {
  const auto pts = clip_to_reference(front, ref);
  if (pts.empty() || samples == 0)
    return 0.0;
  std::vector<double> lower(ref.begin(), ref.end());
  for (const auto &p : pts)
    for (std::size_t k = 0; k < lower.size(); ++k)
      lower[k] = std::min(lower[k], p[k]);
  double box = 1.0;
  for (std::size_t k = 0; k < lower.size(); ++k)
    box *= ref[k] - lower[k];
  if (box <= 0.0)
    return 0.0;
  const auto hits = kernels::dominated_sample_count(pts, lower, ref, samples, seed);
  return box * static_cast<double>(hits) / static_cast<double>(samples);
}

double hypervolume(const std::vector<std::vector<double>> &front, std::span<const double> ref) {
  if (ref.size() <= 4)
    return hypervolume_exact(front, ref);
  return hypervolume_monte_carlo(front, ref);
}

double pct_hv_improvement(double hv_now, double hv_initial, ImprovementMode mode,
                          std::optional<double> hv_max) {
  if (mode == ImprovementMode::relative_to_initial) {
    if (!(hv_initial > 0.0))
      throw Error("pct_hv_improvement: initial hypervolume is zero");
    return 100.0 * (hv_now - hv_initial) / hv_initial;
  }
  if (!hv_max)
    throw Error("pct_hv_improvement: relative_to_gap needs hv_max");
  if (!(*hv_max > hv_initial))
    throw Error("pct_hv_improvement: hv_max must exceed the initial hypervolume");
  return 100.0 * (hv_now - hv_initial) / (*hv_max - hv_initial);
}

} // namespace moso
