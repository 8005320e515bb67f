#pragma once
// Instance / Polygonization data model and the simplicity verifiers.

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "polyarea/error.hpp"
#include "polyarea/geom.hpp"

namespace polyarea {

enum class Objective { Min, Max };

inline const char* to_string(Objective o) { return o == Objective::Min ? "min" : "max"; }

/// True iff `candidate` is strictly better than `incumbent` under `o`.
inline bool better(Objective o, wide_t candidate, wide_t incumbent) {
  return o == Objective::Min ? candidate < incumbent : candidate > incumbent;
}

struct Instance {
  std::string id;
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
  const Point& operator[](std::size_t i) const { return points[i]; }
};

struct Polygonization {
  std::string instance_id;
  std::vector<std::size_t> order;

  friend bool operator==(const Polygonization&, const Polygonization&) = default;
};

/// Throws unless the points are pairwise distinct and within the coordinate cap.
inline void validate_points(const Instance& inst) {
  std::vector<Point> sorted = inst.points;
  for (const auto& p : sorted) {
    if (!within_cap(p)) throw CapacityError("coordinate exceeds 2^40 cap");
  }
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("instance contains duplicate points");
  }
}

inline void check_permutation(const Polygonization& poly, const Instance& inst) {
  if (!poly.instance_id.empty() && !inst.id.empty() && poly.instance_id != inst.id) {
    throw InstanceMismatch("solution is for instance '" + poly.instance_id + "', not '" + inst.id + "'");
  }
  const std::size_t n = inst.size();
  if (poly.order.size() != n) {
    throw InstanceMismatch("solution has " + std::to_string(poly.order.size()) + " vertices, instance has " +
                           std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (std::size_t v : poly.order) {
    if (v >= n) throw InvalidPermutation("vertex index " + std::to_string(v) + " out of range");
    if (seen[v]) throw InvalidPermutation("vertex index " + std::to_string(v) + " used twice");
    seen[v] = true;
  }
  if (n < 3) throw InvalidPermutation("a polygon needs at least 3 vertices");
}

inline std::vector<Point> vertices_of(const Polygonization& poly, const Instance& inst) {
  std::vector<Point> out;
  out.reserve(poly.order.size());
  for (std::size_t v : poly.order) out.push_back(inst[v]);
  return out;
}

/// Directed polygon edge between two instance point indices.
struct EdgeRef {
  std::size_t from = 0;
  std::size_t to = 0;
  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

struct SimplicityReport {
  bool simple = true;
  std::optional<std::pair<EdgeRef, EdgeRef>> witness;

  explicit operator bool() const { return simple; }
};

namespace detail {

// Edge k runs from order[k] to order[k+1 mod n].
struct EdgeView {
  const Polygonization& poly;
  const Instance& inst;
  std::size_t n;

  const Point& from(std::size_t k) const { return inst[poly.order[k]]; }
  const Point& to(std::size_t k) const { return inst[poly.order[(k + 1) % n]]; }
  EdgeRef ref(std::size_t k) const { return {poly.order[k], poly.order[(k + 1) % n]}; }

  bool adjacent(std::size_t p, std::size_t q) const { return (p + 1) % n == q || (q + 1) % n == p; }

  // Adjacent edges may only share their common vertex; any other pair
  // must be disjoint.
  bool conflict(std::size_t p, std::size_t q) const {
    if (p == q) return false;
    if ((p + 1) % n == q) return adjacent_edges_overlap(to(p), from(p), to(q));
    if ((q + 1) % n == p) return adjacent_edges_overlap(to(q), from(q), to(p));
    return segments_interact(from(p), to(p), from(q), to(q));
  }

  SimplicityReport violation(std::size_t p, std::size_t q) const {
    if (q < p) std::swap(p, q);
    return {false, std::make_pair(ref(p), ref(q))};
  }
};

}  // namespace detail

/// Quadratic all-pairs simplicity check. Test oracle for is_simple.
inline SimplicityReport is_simple_reference(const Polygonization& poly, const Instance& inst) {
  check_permutation(poly, inst);
  const detail::EdgeView edges{poly, inst, inst.size()};
  for (std::size_t p = 0; p < edges.n; ++p) {
    for (std::size_t q = p + 1; q < edges.n; ++q) {
      if (edges.conflict(p, q)) return edges.violation(p, q);
    }
  }
  return {};
}

namespace detail {

// Shamos-Hoey sweep in lexicographic (x, y) order. Each edge is stored with
// its lexicographically smaller endpoint as `lo`. The status structure is
// ordered bottom-to-top; comparisons are evaluated at the later of the two
// left endpoints, which is the current event whenever std::set compares.
class SimplicitySweep {
 public:
  SimplicitySweep(const Polygonization& poly, const Instance& inst)
      : view_{poly, inst, inst.size()}, status_(Below{this}) {
    const std::size_t n = view_.n;
    lo_.resize(n);
    hi_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Point& a = view_.from(k);
      const Point& b = view_.to(k);
      lo_[k] = a < b ? a : b;
      hi_[k] = a < b ? b : a;
    }
    handles_.resize(n, status_.end());
  }

  SimplicityReport run() {
    const std::size_t n = view_.n;
    std::vector<std::size_t> events(n);
    std::iota(events.begin(), events.end(), std::size_t{0});
    std::sort(events.begin(), events.end(), [&](std::size_t i, std::size_t j) {
      return view_.from(i) < view_.from(j);
    });
    // Coincident vertices would break the event order; they are a contact.
    for (std::size_t k = 1; k < n; ++k) {
      if (view_.from(events[k - 1]) == view_.from(events[k])) return view_.violation(events[k - 1], events[k]);
    }

    for (std::size_t pos : events) {
      const Point& v = view_.from(pos);
      const std::size_t incident[2] = {(pos + n - 1) % n, pos};
      for (std::size_t e : incident) {
        if (hi_[e] == v && !remove(e)) return found_;
      }
      for (std::size_t e : incident) {
        if (lo_[e] == v && !insert(e)) return found_;
      }
    }
    return {};
  }

 private:
  struct Below {
    SimplicitySweep* sweep;
    bool operator()(std::size_t p, std::size_t q) const { return sweep->below(p, q); }
  };
  using Status = std::set<std::size_t, Below>;

  bool below(std::size_t p, std::size_t q) {
    if (p == q) return false;
    const Point& lp = lo_[p];
    const Point& lq = lo_[q];
    if (lp == lq) {
      const int o = sign(cross(lq, hi_[q], hi_[p]));
      if (o == 0) {
        flag(p, q);
        return p < q;
      }
      return o < 0;
    }
    if (lq < lp) {
      const int o = sign(cross(lq, hi_[q], lp));
      if (o == 0) {
        flag(p, q);
        return p < q;
      }
      return o < 0;
    }
    const int o = sign(cross(lp, hi_[p], lq));
    if (o == 0) {
      flag(p, q);
      return p < q;
    }
    return o > 0;
  }

  void flag(std::size_t p, std::size_t q) {
    if (!pending_) pending_ = std::make_pair(p, q);
  }

  bool check(std::size_t p, std::size_t q) {
    if (view_.conflict(p, q)) {
      found_ = view_.violation(p, q);
      return false;
    }
    return true;
  }

  bool insert(std::size_t e) {
    auto [it, inserted] = status_.insert(e);
    handles_[e] = it;
    if (pending_) {
      found_ = view_.violation(pending_->first, pending_->second);
      return false;
    }
    if (it != status_.begin() && !check(*std::prev(it), e)) return false;
    if (auto next = std::next(it); next != status_.end() && !check(e, *next)) return false;
    return true;
  }

  bool remove(std::size_t e) {
    auto it = handles_[e];
    auto next = std::next(it);
    const bool has_prev = it != status_.begin();
    const std::size_t prev = has_prev ? *std::prev(it) : 0;
    status_.erase(it);
    handles_[e] = status_.end();
    if (has_prev && next != status_.end()) return check(prev, *next);
    return true;
  }

  EdgeView view_;
  std::vector<Point> lo_;
  std::vector<Point> hi_;
  Status status_;
  std::vector<Status::iterator> handles_;
  std::optional<std::pair<std::size_t, std::size_t>> pending_;
  SimplicityReport found_;
};

}  // namespace detail

/// Production simplicity check, O(n log n) sweep with early exit.
/// Straight-angle vertices are allowed; reversal spikes and any contact
/// between non-adjacent edges are violations.
inline SimplicityReport is_simple(const Polygonization& poly, const Instance& inst) {
  check_permutation(poly, inst);
  return detail::SimplicitySweep(poly, inst).run();
}

/// 2 * area of a simple polygonization.
inline TwiceArea polygon_area2(const Polygonization& poly, const Instance& inst) {
  if (!is_simple(poly, inst)) throw NotSimple("area of a non-simple polygon is undefined");
  return abs_wide(twice_signed_area(vertices_of(poly, inst)));
}

/// Shoelace only; caller vouches for simplicity.
inline TwiceArea polygon_area2_unchecked(const Polygonization& poly, const Instance& inst) {
  return abs_wide(twice_signed_area(vertices_of(poly, inst)));
}

inline TwiceArea hull_area2(const Instance& inst) {
  const auto hull = convex_hull(inst.points);
  std::vector<Point> pts;
  pts.reserve(hull.size());
  for (std::size_t h : hull) pts.push_back(inst[h]);
  return twice_signed_area(pts);
}

inline Polygonization reversed(Polygonization poly) {
  std::reverse(poly.order.begin(), poly.order.end());
  return poly;
}

}  // namespace polyarea
