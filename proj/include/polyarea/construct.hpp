#pragma once
// Polygonization constructors.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyarea/error.hpp"
#include "polyarea/geom.hpp"
#include "polyarea/greedy.hpp"
#include "polyarea/optimize.hpp"
#include "polyarea/parallel.hpp"
#include "polyarea/polygon.hpp"
#include "polyarea/rng.hpp"
#include "polyarea/tour.hpp"

namespace polyarea {

/// Points other than the anchor in counter-clockwise angular order,
/// starting at the anchor's next hull vertex and ending at its previous one.
struct AngularOrder {
  std::size_t anchor = 0;
  std::vector<std::size_t> sequence;
};

/// Equal-angle groups run outward, except the group on the ray to the
/// previous hull vertex, which runs inward so the boundary closes along it
/// without doubling back.
inline AngularOrder angular_order(const Instance& inst, std::size_t anchor, std::span<const std::size_t> hull) {
  const auto at = std::find(hull.begin(), hull.end(), anchor);
  if (at == hull.end()) throw InvalidArgument("star anchor " + std::to_string(anchor) + " is not a hull vertex");
  const std::size_t h = hull.size();
  const std::size_t pos = static_cast<std::size_t>(at - hull.begin());
  const Point& o = inst[anchor];
  const Point& closing = inst[hull[(pos + h - 1) % h]];

  AngularOrder result{anchor, {}};
  result.sequence.reserve(inst.size() - 1);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (i != anchor) result.sequence.push_back(i);
  }
  std::sort(result.sequence.begin(), result.sequence.end(), [&](std::size_t i, std::size_t j) {
    const wide_t c = cross(o, inst[i], inst[j]);
    if (c != 0) return c > 0;
    const wide_t di = squared_distance(o, inst[i]);
    const wide_t dj = squared_distance(o, inst[j]);
    const bool inward = cross(o, closing, inst[i]) == 0;
    return inward ? di > dj : di < dj;
  });
  return result;
}

/// Star-shaped polygonization around a hull vertex, O(n log n).
inline Polygonization star_polygonization(const Instance& inst, std::size_t anchor) {
  const auto hull = convex_hull(inst.points);
  const AngularOrder ao = angular_order(inst, anchor, hull);
  Polygonization poly{inst.id, {}};
  poly.order.reserve(inst.size());
  poly.order.push_back(anchor);
  poly.order.insert(poly.order.end(), ao.sequence.begin(), ao.sequence.end());
  return poly;
}

/// Star-shaped polygon from a random hull anchor, then a seeded random walk
/// over feasible moves, at most 8 per point and 32832 in all. A
/// deterministic function of (inst, seed).
inline Polygonization random_polygonization(const Instance& inst, std::uint64_t seed) {
  const auto hull = convex_hull(inst.points);
  SplitMix64 rng(seed);
  const Polygonization start = star_polygonization(inst, hull[rng.below(hull.size())]);
  if (inst.size() < 4) return start;
  Tour tour(inst, start, default_neighborhood(inst.size()));
  detail::random_walk(tour, 8 * std::min<std::size_t>(inst.size(), 4096) + 64, rng);
  return tour.to_polygonization();
}

struct GreedyReport {
  bool fell_back = false;
  std::string reason;
};

/// Greedy insertion; if it gets stuck, falls back to
/// random_polygonization(inst, seed) and says so in `report`.
inline Polygonization greedy_insertion(const Instance& inst, Objective objective, std::uint64_t seed = 0,
                                       GreedyReport* report = nullptr, GreedyOptions options = {}) {
  try {
    return greedy_insertion_strict(inst, objective, options);
  } catch (const ConstructionFailure& failure) {
    if (report) *report = {true, failure.what()};
    return random_polygonization(inst, seed);
  }
}

struct ApproxReport {
  std::size_t best_anchor = 0;
  TwiceArea best_star_area2 = 0;
  TwiceArea hull_area2 = 0;
  bool used_fallback = false;
};

/// Max-Area polygonization with area strictly above half the hull area:
/// the best star over all hull anchors, else insertion from the hull plus
/// hill climbing.
inline Polygonization max_area_approx(const Instance& inst, unsigned threads = 1, ApproxReport* report = nullptr) {
  const auto hull = convex_hull(inst.points);
  std::vector<Point> ring;
  for (std::size_t h : hull) ring.push_back(inst[h]);
  const TwiceArea hull2 = twice_signed_area(ring);

  std::vector<TwiceArea> areas(hull.size());
  parallel_for(hull.size(), threads, [&](std::size_t k) {
    areas[k] = polygon_area2_unchecked(star_polygonization(inst, hull[k]), inst);
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < hull.size(); ++k) {
    if (areas[k] > areas[best] || (areas[k] == areas[best] && hull[k] < hull[best])) best = k;
  }
  ApproxReport local{hull[best], areas[best], hull2, false};
  Polygonization result = star_polygonization(inst, hull[best]);
  TwiceArea result_area = areas[best];

  if (2 * result_area <= hull2) {
    local.used_fallback = true;
    Polygonization grown = greedy_insertion(inst, Objective::Max);
    TwiceArea grown_area = polygon_area2_unchecked(grown, inst);
    if (2 * grown_area <= hull2) {
      SearchBudget budget;
      budget.max_moves = 100 * inst.size() + 1000;
      budget.max_millis = 60'000;
      grown = hill_climb(grown, inst, Objective::Max, budget);
      grown_area = polygon_area2_unchecked(grown, inst);
    }
    if (grown_area > result_area) {
      result = std::move(grown);
      result_area = grown_area;
    }
  }
  if (report) *report = local;
  return result;
}

}  // namespace polyarea
