#pragma once
// Pick's theorem bookkeeping and the lattice-point area bounds.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "polyarea/geom.hpp"
#include "polyarea/polygon.hpp"

namespace polyarea {

/// Binary gcd on magnitudes; gcd(0, k) = k.
inline std::uint64_t gcd_binary(std::uint64_t a, std::uint64_t b) {
  if (a == 0) return b;
  if (b == 0) return a;
  const int shift = __builtin_ctzll(a | b);
  a >>= __builtin_ctzll(a);
  do {
    b >>= __builtin_ctzll(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

inline std::uint64_t abs_delta(coord_t a, coord_t b) {
  return a > b ? static_cast<std::uint64_t>(a - b) : static_cast<std::uint64_t>(b - a);
}

/// Lattice points on the closed segment [a, b], counting one endpoint.
inline std::uint64_t lattice_steps(const Point& a, const Point& b) {
  return gcd_binary(abs_delta(a.x, b.x), abs_delta(a.y, b.y));
}

struct LatticeStats {
  wide_t b = 0;
  wide_t i = 0;
  TwiceArea area2 = 0;
};

struct HullGap {
  wide_t h_b = 0;
  wide_t h_i = 0;
};

struct AreaBounds2 {
  TwiceArea lower2 = 0;
  TwiceArea upper2 = 0;
};

namespace detail {

inline wide_t boundary_count(std::span<const Point> ring) {
  wide_t b = 0;
  for (std::size_t k = 0; k < ring.size(); ++k) b += lattice_steps(ring[k], ring[(k + 1) % ring.size()]);
  return b;
}

inline wide_t pick_interior(TwiceArea area2, wide_t b) { return (area2 - b + 2) / 2; }

}  // namespace detail

inline wide_t boundary_lattice_count(const Polygonization& poly, const Instance& inst) {
  if (!is_simple(poly, inst)) throw NotSimple("boundary_lattice_count requires a simple polygon");
  return detail::boundary_count(vertices_of(poly, inst));
}

inline wide_t interior_lattice_count(const Polygonization& poly, const Instance& inst) {
  if (!is_simple(poly, inst)) throw NotSimple("interior_lattice_count requires a simple polygon");
  const auto ring = vertices_of(poly, inst);
  return detail::pick_interior(abs_wide(twice_signed_area(ring)), detail::boundary_count(ring));
}

inline LatticeStats lattice_stats(const Polygonization& poly, const Instance& inst) {
  if (!is_simple(poly, inst)) throw NotSimple("lattice_stats requires a simple polygon");
  const auto ring = vertices_of(poly, inst);
  LatticeStats s;
  s.area2 = abs_wide(twice_signed_area(ring));
  s.b = detail::boundary_count(ring);
  s.i = detail::pick_interior(s.area2, s.b);
  return s;
}

enum class HullLocation { Outside, Boundary, Inside };

/// Classifies points against a CCW convex polygon (strictly convex vertices)
/// by binary search on the fan around hull[0]. O(log h) per query.
class ConvexLocator {
 public:
  explicit ConvexLocator(std::vector<Point> hull) : hull_(std::move(hull)) {}

  HullLocation locate(const Point& q) const { return locate_edge(q).first; }

  /// Location plus, for boundary points, the hull edge k (hull[k] to
  /// hull[k+1]) containing q. A vertex reports the edge it starts.
  std::pair<HullLocation, std::size_t> locate_edge(const Point& q) const {
    const std::size_t h = hull_.size();
    const Point& o = hull_[0];
    if (q == o) return {HullLocation::Boundary, 0};
    const wide_t c1 = cross(o, hull_[1], q);
    const wide_t cl = cross(o, hull_[h - 1], q);
    if (c1 < 0 || cl > 0) return {HullLocation::Outside, 0};
    if (c1 == 0) {
      return {in_closed_box(o, hull_[1], q) ? HullLocation::Boundary : HullLocation::Outside, q == hull_[1] ? 1 : 0};
    }
    if (cl == 0) {
      return {in_closed_box(o, hull_[h - 1], q) ? HullLocation::Boundary : HullLocation::Outside, h - 1};
    }
    // Find wedge k with q between rays o->hull[k] and o->hull[k+1].
    std::size_t lo = 1;
    std::size_t hi = h - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (cross(o, hull_[mid], q) >= 0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const wide_t side = cross(hull_[lo], hull_[lo + 1], q);
    if (side > 0) return {HullLocation::Inside, 0};
    if (side == 0) return {HullLocation::Boundary, q == hull_[lo + 1] ? (lo + 1) % h : lo};
    return {HullLocation::Outside, 0};
  }

 private:
  std::vector<Point> hull_;
};

inline std::vector<Point> hull_ring(const Instance& inst) {
  std::vector<Point> ring;
  for (std::size_t h : convex_hull(inst.points)) ring.push_back(inst[h]);
  return ring;
}

inline HullGap hull_gap(const Instance& inst) {
  const auto ring = hull_ring(inst);
  const TwiceArea area2 = twice_signed_area(ring);
  const wide_t b_hull = detail::boundary_count(ring);
  const wide_t i_hull = detail::pick_interior(area2, b_hull);
  const ConvexLocator locator(ring);
  wide_t on_boundary = 0;
  wide_t inside = 0;
  for (const auto& p : inst.points) {
    switch (locator.locate(p)) {
      case HullLocation::Boundary: ++on_boundary; break;
      case HullLocation::Inside: ++inside; break;
      case HullLocation::Outside: break;
    }
  }
  return {b_hull - on_boundary, i_hull - inside};
}

/// Twice-area bounds valid for every simple polygonization:
/// lower2 = n - 2, upper2 = n + h_b + 2 h_i - 2.
inline AreaBounds2 area_bounds2(const Instance& inst) {
  const HullGap gap = hull_gap(inst);
  const wide_t n = static_cast<wide_t>(inst.size());
  return {n - 2, n + gap.h_b + 2 * gap.h_i - 2};
}

}  // namespace polyarea
