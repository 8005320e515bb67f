#pragma once
// Greedy insertion: start from the hull boundary and repeatedly notch an
// unused point into an edge. Every unused point stays strictly inside the
// current polygon, so an insertion (p into edge ab) is feasible when the
// closed triangle abp holds no other input point and neither new edge
// touches the rest of the boundary.
//
// Notches can wall points off from every edge. When that happens, reflex
// vertices near a stuck point are taken back out (the notch is filled and
// the vertex becomes unused again) until the point sees an edge.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyarea/error.hpp"
#include "polyarea/geom.hpp"
#include "polyarea/grid.hpp"
#include "polyarea/lattice.hpp"
#include "polyarea/polygon.hpp"

namespace polyarea {

struct GreedyOptions {
  /// Up to this many points every unused point is a candidate for every
  /// edge, which makes each step the exact best feasible insertion.
  std::size_t exhaustive_limit = 256;
  /// Above the limit, candidates for an edge are the nearest unused points
  /// on its inner side, gathered until at least this many are found.
  std::size_t candidate_pool = 24;
  /// Feasibility checks per edge evaluation above the limit.
  std::size_t max_checks = 48;
  /// Above the limit, edge candidates come from cells at most this far
  /// (Chebyshev, in grid cells) from the edge; farther points are reached
  /// by the point-centric rescan.
  std::size_t gather_radius = 8;
  /// Above the limit, a point that sees no edge within this many cells is
  /// treated as stuck.
  std::size_t search_radius = 32;
  /// Vertex removals allowed per input point before giving up.
  std::size_t repairs_per_point = 4;
  /// Reruns after a failure; each rerun inserts the points left over by
  /// earlier runs as soon as they fit.
  std::size_t retries = 3;
};

namespace detail {

/// Twice-area of the triangle removed by inserting p into edge ab.
inline TwiceArea notch_area2(const Point& a, const Point& b, const Point& p) { return cross(a, b, p); }

inline bool in_closed_triangle(const Point& a, const Point& b, const Point& c, const Point& q) {
  return cross(a, b, q) >= 0 && cross(b, c, q) >= 0 && cross(c, a, q) >= 0;
}

class GreedyInserter {
 public:
  GreedyInserter(const Instance& inst, Objective objective, GreedyOptions options, std::vector<char> urgent = {})
      : inst_(inst),
        pts_(inst.points),
        objective_(objective),
        options_(options),
        exhaustive_(inst.size() <= options.exhaustive_limit),
        frame_(pts_, std::max<std::size_t>(1, inst.size() / 2)),
        points_(pts_, frame_),
        edges_(pts_, frame_),
        marks_(frame_.cell_count()),
        next_(inst.size(), kNone),
        prev_(inst.size(), kNone),
        slot_(inst.size(), kNone),
        placed_in_(inst.size(), 0),
        urgent_(std::move(urgent)),
        queue_(Worse{objective}) {
    urgent_.resize(inst.size(), 0);
  }

  /// The polygonization, or nothing if points are left over.
  std::optional<Polygonization> run() {
    seed_boundary();
    for (std::size_t v : cycle_) push_candidate(v, next_[v]);
    const std::size_t repair_budget = options_.repairs_per_point * pts_.size() + 16;
    while (!remaining_.empty()) {
      if (queue_.empty() && !rescan()) {
        if (repairs_ > repair_budget || futile_ > kFutileRounds || !repair()) return std::nullopt;
        continue;
      }
      const Entry top = queue_.top();
      queue_.pop();
      if (next_[top.a] != top.b) continue;
      if (slot_[top.p] == kNone || !feasible(top.a, top.b, top.p)) {
        push_candidate(top.a, top.b);
        continue;
      }
      insert(top.a, top.b, top.p);
    }
    Polygonization poly{inst_.id, {}};
    poly.order.reserve(pts_.size());
    std::size_t v = cycle_.front();
    do {
      poly.order.push_back(v);
      v = next_[v];
    } while (v != cycle_.front());
    return poly;
  }

  std::span<const std::size_t> remaining() const { return remaining_; }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  static constexpr std::size_t kClearDepth = 4;
  static constexpr std::size_t kFutileRounds = 2;

  struct Entry {
    TwiceArea area2;
    std::size_t p;
    std::size_t a;
    std::size_t b;
    bool urgent;
  };

  // Priority order: urgent points, preferred area, then lowest (point, edge start).
  struct Worse {
    Objective objective;
    bool operator()(const Entry& x, const Entry& y) const {
      if (x.urgent != y.urgent) return y.urgent;
      if (x.area2 != y.area2) return objective == Objective::Min ? x.area2 < y.area2 : x.area2 > y.area2;
      if (x.p != y.p) return x.p > y.p;
      return x.a > y.a;
    }
  };

  bool preferred(const Entry& x, const Entry& y) const { return Worse{objective_}(y, x); }

  void seed_boundary() {
    const auto hull = convex_hull(pts_);
    std::vector<Point> ring;
    for (std::size_t h : hull) ring.push_back(pts_[h]);
    const ConvexLocator locator(ring);
    std::vector<bool> on_hull(pts_.size(), false);
    for (std::size_t h : hull) on_hull[h] = true;

    std::vector<std::vector<std::size_t>> along(hull.size());
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (on_hull[i]) continue;
      const auto [where, edge] = locator.locate_edge(pts_[i]);
      if (where == HullLocation::Boundary) {
        along[edge].push_back(i);
      } else {
        slot_[i] = remaining_.size();
        remaining_.push_back(i);
      }
    }
    for (std::size_t k = 0; k < hull.size(); ++k) {
      const Point& start = pts_[hull[k]];
      std::sort(along[k].begin(), along[k].end(), [&](std::size_t i, std::size_t j) {
        return squared_distance(start, pts_[i]) < squared_distance(start, pts_[j]);
      });
      cycle_.push_back(hull[k]);
      cycle_.insert(cycle_.end(), along[k].begin(), along[k].end());
    }
    for (std::size_t i = 0; i < cycle_.size(); ++i) {
      const std::size_t a = cycle_[i];
      const std::size_t b = cycle_[(i + 1) % cycle_.size()];
      next_[a] = b;
      prev_[b] = a;
      edges_.add(a, b);
    }
  }

  bool feasible(std::size_t a, std::size_t b, std::size_t p) {
    const Point& pa = pts_[a];
    const Point& pb = pts_[b];
    const Point& pp = pts_[p];
    if (cross(pa, pb, pp) <= 0) return false;
    bool empty = true;
    frame_.triangle_cells(pa, pb, pp, [&](std::size_t c) {
      if (!empty) return;
      for (std::size_t q : points_.cell(c)) {
        if (q == a || q == b || q == p) continue;
        if (in_closed_triangle(pa, pb, pp, pts_[q])) {
          empty = false;
          return;
        }
      }
    });
    if (!empty) return false;
    auto clear_of = [&](std::size_t end, const Point& from, const Point& to) {
      return edges_.for_each_near_segment(from, to, [&](const EdgeKey& e) {
        return e.touches(end) || !segments_interact(from, to, pts_[e.u], pts_[e.v]);
      });
    };
    return clear_of(a, pa, pp) && clear_of(b, pp, pb);
  }

  void gather_near_edge(std::size_t a, std::size_t b, std::vector<std::size_t>& out) {
    const std::size_t limit = std::max(frame_.cols(), frame_.rows());
    for (std::size_t radius = 1;; radius *= 2) {
      out.clear();
      marks_.next_pass();
      frame_.segment_cells(pts_[a], pts_[b], [&](std::size_t cell) {
        const std::size_t col = cell % frame_.cols();
        const std::size_t row = cell / frame_.cols();
        const std::size_t c0 = col > radius ? col - radius : 0;
        const std::size_t r0 = row > radius ? row - radius : 0;
        const std::size_t c1 = std::min(frame_.cols() - 1, col + radius);
        const std::size_t r1 = std::min(frame_.rows() - 1, row + radius);
        for (std::size_t r = r0; r <= r1; ++r) {
          for (std::size_t c = c0; c <= c1; ++c) {
            const std::size_t id = frame_.index(c, r);
            if (!marks_.mark(id)) continue;
            for (std::size_t q : points_.cell(id)) {
              if (slot_[q] != kNone && cross(pts_[a], pts_[b], pts_[q]) > 0) out.push_back(q);
            }
          }
        }
      });
      if (out.size() >= options_.candidate_pool || radius >= limit) return;
      if (radius >= options_.gather_radius) return;
    }
  }

  std::optional<Entry> best_for_edge(std::size_t a, std::size_t b) {
    candidates_.clear();
    if (exhaustive_) {
      for (std::size_t q : remaining_) {
        if (cross(pts_[a], pts_[b], pts_[q]) > 0) candidates_.push_back(q);
      }
    } else {
      gather_near_edge(a, b, candidates_);
    }
    entries_.clear();
    for (std::size_t q : candidates_) entries_.push_back({notch_area2(pts_[a], pts_[b], pts_[q]), q, a, b, urgent_[q] != 0});
    std::sort(entries_.begin(), entries_.end(), [&](const Entry& x, const Entry& y) { return preferred(x, y); });

    const std::size_t budget = exhaustive_ ? entries_.size() : std::min(entries_.size(), options_.max_checks);
    for (std::size_t i = 0; i < budget; ++i) {
      if (feasible(a, b, entries_[i].p)) return entries_[i];
    }
    // Near points are the likeliest to see the edge; try them last-resort.
    for (std::size_t i = entries_.size(); i-- > budget && entries_.size() - i <= options_.max_checks / 3;) {
      if (feasible(a, b, entries_[i].p)) return entries_[i];
    }
    return std::nullopt;
  }

  void push_candidate(std::size_t a, std::size_t b) {
    if (auto e = best_for_edge(a, b)) queue_.push(*e);
  }

  // Best feasible insertion of p into an edge near it, widening the search
  // until one is found.
  std::optional<Entry> best_for_point(std::size_t p) {
    std::optional<Entry> best;
    const std::size_t limit = search_limit();
    for (std::size_t radius = 1;; radius *= 2) {
      edges_.for_each_near_point(pts_[p], radius, [&](const EdgeKey& e) {
        const std::size_t a = next_[e.u] == e.v ? e.u : e.v;
        const std::size_t b = next_[a];
        const Entry cand{notch_area2(pts_[a], pts_[b], pts_[p]), p, a, b, urgent_[p] != 0};
        if (cand.area2 <= 0 || (best && !preferred(cand, *best))) return;
        if (feasible(a, b, p)) best = cand;
      });
      if (best || radius >= limit) return best;
    }
  }

  // Point-centric search used when no edge has a queued candidate. Queues
  // the best insertion of every point that has one; the rest are stuck.
  bool rescan() {
    stuck_.clear();
    bool any = false;
    for (std::size_t p : remaining_) {
      if (auto e = best_for_point(p)) {
        queue_.push(*e);
        any = true;
      } else {
        stuck_.push_back(p);
      }
    }
    return any;
  }

  // Fills notches around each stuck point, nearest visible reflex vertex
  // first, until the point can be inserted. Returns false if nothing changed.
  bool repair() {
    std::sort(stuck_.begin(), stuck_.end());
    ++round_;
    const std::size_t before = repairs_;
    bool placed = false;
    const std::size_t limit = search_limit();
    for (std::size_t p : stuck_) {
      if (slot_[p] == kNone) continue;
      bool inserted = false;
      for (std::size_t radius = 1; !inserted; radius *= 2) {
        std::vector<std::size_t> near;
        near_points(pts_[p], radius, [&](std::size_t q) {
          if (slot_[q] == kNone && reflex(q) && visible(p, q)) near.push_back(q);
        });
        sort_by_distance(pts_[p], near);
        const std::size_t pass = repairs_;
        for (std::size_t q : near) {
          if (slot_[q] != kNone || !visible(p, q) || !clear(q, 0)) continue;
          if (auto e = best_for_point(p)) {
            insert(e->a, e->b, p);
            placed_in_[p] = round_;
            inserted = placed = true;
            break;
          }
        }
        if (radius >= limit) {
          if (repairs_ == pass) break;
          radius /= 2;
        }
      }
    }
    futile_ = placed ? 0 : futile_ + 1;
    return repairs_ != before;
  }

  std::size_t search_limit() const {
    const std::size_t full = std::max(frame_.cols(), frame_.rows());
    return exhaustive_ ? full : std::min(full, options_.search_radius);
  }

  bool reflex(std::size_t q) const { return cross(pts_[prev_[q]], pts_[next_[q]], pts_[q]) > 0; }

  void sort_by_distance(const Point& o, std::vector<std::size_t>& ids) const {
    std::sort(ids.begin(), ids.end(), [&](std::size_t i, std::size_t j) {
      const auto di = squared_distance(o, pts_[i]);
      const auto dj = squared_distance(o, pts_[j]);
      return di != dj ? di < dj : i < j;
    });
  }

  // Removes reflex vertex q, first clearing reflex vertices that sit in the
  // triangle it cuts off.
  bool clear(std::size_t q, std::size_t depth) {
    if (placed_in_[q] == round_ || !reflex(q)) return false;
    if (!removable(q)) {
      if (depth >= kClearDepth) return false;
      const std::size_t a = prev_[q];
      const std::size_t b = next_[q];
      std::vector<std::size_t> inside;
      frame_.triangle_cells(pts_[a], pts_[b], pts_[q], [&](std::size_t c) {
        for (std::size_t r : points_.cell(c)) {
          if (r != a && r != b && r != q && slot_[r] == kNone && reflex(r) &&
              in_closed_triangle(pts_[a], pts_[b], pts_[q], pts_[r])) {
            inside.push_back(r);
          }
        }
      });
      sort_by_distance(pts_[q], inside);
      for (std::size_t r : inside) {
        if (slot_[r] == kNone && clear(r, depth + 1) && prev_[q] == a && next_[q] == b && removable(q)) break;
      }
      if (!reflex(q) || !removable(q)) return false;
    }
    remove(q);
    return true;
  }

  template <typename Fn>
  void near_points(const Point& p, std::size_t radius, Fn&& fn) const {
    const std::size_t pc = frame_.col_of(p.x);
    const std::size_t pr = frame_.row_of(p.y);
    const std::size_t c0 = pc > radius ? pc - radius : 0;
    const std::size_t r0 = pr > radius ? pr - radius : 0;
    const std::size_t c1 = std::min(frame_.cols() - 1, pc + radius);
    const std::size_t r1 = std::min(frame_.rows() - 1, pr + radius);
    for (std::size_t r = r0; r <= r1; ++r) {
      for (std::size_t c = c0; c <= c1; ++c) {
        for (std::size_t q : points_.cell(frame_.index(c, r))) fn(q);
      }
    }
  }

  // Open segment pq misses the boundary.
  bool visible(std::size_t p, std::size_t q) {
    const Point& pp = pts_[p];
    const Point& pq = pts_[q];
    return edges_.for_each_near_segment(pp, pq, [&](const EdgeKey& e) {
      return e.touches(q) ? !adjacent_edges_overlap(pq, pp, pts_[e.u == q ? e.v : e.u])
                          : !segments_interact(pp, pq, pts_[e.u], pts_[e.v]);
    });
  }

  // A reflex vertex q can be dropped when the triangle it cuts off, closed,
  // holds no other input point: then no boundary edge can cross the new
  // edge either, and q ends up strictly inside.
  bool removable(std::size_t q) {
    const std::size_t a = prev_[q];
    const std::size_t b = next_[q];
    const Point& pa = pts_[a];
    const Point& pb = pts_[b];
    const Point& pq = pts_[q];
    if (cross(pa, pb, pq) <= 0) return false;
    bool empty = true;
    frame_.triangle_cells(pa, pb, pq, [&](std::size_t c) {
      if (!empty) return;
      for (std::size_t r : points_.cell(c)) {
        if (r != a && r != b && r != q && in_closed_triangle(pa, pb, pq, pts_[r])) {
          empty = false;
          return;
        }
      }
    });
    return empty;
  }

  void remove(std::size_t q) {
    const std::size_t a = prev_[q];
    const std::size_t b = next_[q];
    next_[a] = b;
    prev_[b] = a;
    next_[q] = prev_[q] = kNone;
    edges_.remove(a, q);
    edges_.remove(q, b);
    edges_.add(a, b);
    slot_[q] = remaining_.size();
    remaining_.push_back(q);
    ++repairs_;
    push_candidate(a, b);
  }

  void insert(std::size_t a, std::size_t b, std::size_t p) {
    next_[a] = p;
    prev_[p] = a;
    next_[p] = b;
    prev_[b] = p;
    edges_.remove(a, b);
    edges_.add(a, p);
    edges_.add(p, b);
    const std::size_t s = slot_[p];
    remaining_[s] = remaining_.back();
    slot_[remaining_[s]] = s;
    remaining_.pop_back();
    slot_[p] = kNone;
    push_candidate(a, p);
    push_candidate(p, b);
  }

  const Instance& inst_;
  std::span<const Point> pts_;
  Objective objective_;
  GreedyOptions options_;
  bool exhaustive_;
  GridFrame frame_;
  PointGrid points_;
  EdgeGrid edges_;
  CellMarks marks_;
  std::vector<std::size_t> next_;
  std::vector<std::size_t> prev_;
  std::vector<std::size_t> slot_;  // position in remaining_, or kNone once inserted
  std::vector<std::size_t> placed_in_;  // repair round that inserted the point
  std::vector<std::size_t> remaining_;
  std::vector<char> urgent_;
  std::vector<std::size_t> cycle_;
  std::priority_queue<Entry, std::vector<Entry>, Worse> queue_;
  std::vector<std::size_t> candidates_;
  std::vector<Entry> entries_;
  std::vector<std::size_t> stuck_;
  std::size_t round_ = 0;
  std::size_t repairs_ = 0;
  std::size_t futile_ = 0;  // consecutive repair rounds that placed no stuck point
};

}  // namespace detail

/// Throws ConstructionFailure if points are still stuck after the repair
/// budget and all reruns are spent; greedy_insertion() in construct.hpp
/// falls back.
inline Polygonization greedy_insertion_strict(const Instance& inst, Objective objective,
                                              GreedyOptions options = {}) {
  std::vector<char> urgent(inst.size(), 0);
  for (std::size_t attempt = 0;; ++attempt) {
    detail::GreedyInserter inserter(inst, objective, options, urgent);
    if (auto poly = inserter.run()) return std::move(*poly);
    if (attempt == options.retries) {
      throw ConstructionFailure("greedy insertion found no feasible insertion for " +
                                std::to_string(inserter.remaining().size()) + " remaining points");
    }
    for (std::size_t p : inserter.remaining()) urgent[p] = 1;
  }
}

}  // namespace polyarea
