#pragma once
// Exact integer geometric primitives. No floating point is used by any
// predicate in this header.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "polyarea/error.hpp"

namespace polyarea {

using coord_t = std::int64_t;
using wide_t = __int128;

/// Signed twice-area; always an integer for lattice polygons.
using TwiceArea = wide_t;

/// Largest admissible |coordinate|. Keeps every cross product and a
/// 10^6-term shoelace sum inside a signed 128-bit accumulator.
inline constexpr coord_t kCoordCap = coord_t{1} << 40;

struct Point {
  coord_t x = 0;
  coord_t y = 0;

  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

inline constexpr bool within_cap(const Point& p) {
  return p.x <= kCoordCap && p.x >= -kCoordCap && p.y <= kCoordCap && p.y >= -kCoordCap;
}

enum class Orientation : int { CW = -1, Collinear = 0, CCW = 1 };

/// (b - a) x (c - a), exact.
inline constexpr wide_t cross(const Point& a, const Point& b, const Point& c) {
  const wide_t bx = wide_t{b.x} - a.x;
  const wide_t by = wide_t{b.y} - a.y;
  const wide_t cx = wide_t{c.x} - a.x;
  const wide_t cy = wide_t{c.y} - a.y;
  return bx * cy - by * cx;
}

/// (b - a) . (c - a), exact.
inline constexpr wide_t dot(const Point& a, const Point& b, const Point& c) {
  return (wide_t{b.x} - a.x) * (wide_t{c.x} - a.x) + (wide_t{b.y} - a.y) * (wide_t{c.y} - a.y);
}

inline constexpr int sign(wide_t v) { return (v > 0) - (v < 0); }

inline constexpr Orientation orientation(const Point& a, const Point& b, const Point& c) {
  return static_cast<Orientation>(sign(cross(a, b, c)));
}

inline constexpr wide_t squared_distance(const Point& a, const Point& b) {
  const wide_t dx = wide_t{b.x} - a.x;
  const wide_t dy = wide_t{b.y} - a.y;
  return dx * dx + dy * dy;
}

/// True iff c lies on the closed segment [a, b]; a, b, c assumed collinear.
inline constexpr bool in_closed_box(const Point& a, const Point& b, const Point& c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
         c.y <= std::max(a.y, b.y);
}

inline constexpr bool on_segment(const Point& a, const Point& b, const Point& c) {
  return cross(a, b, c) == 0 && in_closed_box(a, b, c);
}

class Segment {
 public:
  Segment(Point a, Point b) : a_(a), b_(b) {
    if (a == b) throw InvalidArgument("zero-length segment");
  }
  const Point& a() const { return a_; }
  const Point& b() const { return b_; }

 private:
  Point a_;
  Point b_;
};

/// True iff the closed segments [a, b] and [c, d] share at least one point.
inline constexpr bool segments_interact(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int d1 = sign(cross(c, d, a));
  const int d2 = sign(cross(c, d, b));
  const int d3 = sign(cross(a, b, c));
  const int d4 = sign(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && in_closed_box(c, d, a)) return true;
  if (d2 == 0 && in_closed_box(c, d, b)) return true;
  if (d3 == 0 && in_closed_box(a, b, c)) return true;
  if (d4 == 0 && in_closed_box(a, b, d)) return true;
  return false;
}

inline bool segments_interact(const Segment& s1, const Segment& s2) {
  return segments_interact(s1.a(), s1.b(), s2.a(), s2.b());
}

/// Two edges meeting at `shared` overlap beyond that point iff their other
/// endpoints lie on the same ray from it.
inline constexpr bool adjacent_edges_overlap(const Point& shared, const Point& u, const Point& v) {
  return cross(shared, u, v) == 0 && dot(shared, u, v) > 0;
}

/// Shoelace sum; positive iff the vertices run counter-clockwise.
inline TwiceArea twice_signed_area(std::span<const Point> vertices) {
  if (vertices.size() < 3) throw InvalidArgument("twice_signed_area needs at least 3 vertices");
  wide_t sum = 0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = vertices[i];
    const Point& q = vertices[(i + 1) % n];
    sum += wide_t{p.x} * q.y - wide_t{q.x} * p.y;
  }
  return sum;
}

inline wide_t abs_wide(wide_t v) { return v < 0 ? -v : v; }

/// CCW hull vertex indices via monotone chain. Points in the relative
/// interior of hull edges are not reported.
inline std::vector<std::size_t> convex_hull(std::span<const Point> points) {
  const std::size_t n = points.size();
  if (n < 3) throw InvalidArgument("convex_hull needs at least 3 points");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return points[i] < points[j] || (points[i] == points[j] && i < j);
  });

  std::vector<std::size_t> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(points[hull[k - 2]], points[hull[k - 1]], points[idx[i]]) <= 0) --k;
    hull[k++] = idx[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(points[hull[k - 2]], points[hull[k - 1]], points[idx[i]]) <= 0) --k;
    hull[k++] = idx[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw AllCollinear();
  return hull;
}

inline std::string to_string(wide_t v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  // Work in the negative range so the minimum value is representable.
  wide_t t = negative ? v : -v;
  std::string digits;
  while (t != 0) {
    digits.push_back(static_cast<char>('0' - static_cast<int>(t % 10)));
    t /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

}  // namespace polyarea
