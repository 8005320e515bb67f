#pragma once
// Mutable polygonization for local search: a doubly linked cycle, an exact
// running twice-area, and an edge grid for local feasibility checks.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyarea/geom.hpp"
#include "polyarea/grid.hpp"
#include "polyarea/polygon.hpp"
#include "polyarea/rng.hpp"

namespace polyarea {

struct Move {
  enum class Kind { TwoOpt, Relocate };

  Kind kind = Kind::TwoOpt;
  /// TwoOpt: edges (a, next a) and (b, next b) become (a, b) and
  /// (next a, next b); the chain next(a)..b is reversed.
  /// Relocate: vertex a moves onto edge (b, next b).
  std::size_t a = 0;
  std::size_t b = 0;
  /// Exact change of the signed twice-area.
  TwiceArea delta2 = 0;

  static Move two_opt(std::size_t a, std::size_t b, TwiceArea d) { return {Kind::TwoOpt, a, b, d}; }
  static Move relocate(std::size_t k, std::size_t p, TwiceArea d) { return {Kind::Relocate, k, p, d}; }
};

struct NeighborhoodOptions {
  /// Longest chain a 2-opt move may reverse.
  std::size_t two_opt_window = 64;
  /// Relocation targets are edges within this many grid cells of the vertex.
  std::size_t relocate_radius = 2;
};

/// Instances of up to 64 points get the full move set.
inline NeighborhoodOptions default_neighborhood(std::size_t n) {
  NeighborhoodOptions opt;
  if (n <= 64) {
    opt.two_opt_window = n;
    opt.relocate_radius = n;
  }
  return opt;
}

class Tour {
 public:
  /// `poly` must be simple; this is not re-verified here.
  Tour(const Instance& inst, const Polygonization& poly, NeighborhoodOptions options = {})
      : pts_(inst.points),
        id_(poly.instance_id.empty() ? inst.id : poly.instance_id),
        options_(options),
        next_(inst.size()),
        prev_(inst.size()),
        grid_(pts_, GridFrame(pts_, std::max<std::size_t>(1, inst.size() / 2))) {
    const std::size_t n = poly.order.size();
    for (std::size_t i = 0; i < n; ++i) {
      next_[poly.order[i]] = poly.order[(i + 1) % n];
      prev_[poly.order[(i + 1) % n]] = poly.order[i];
      grid_.add(poly.order[i], poly.order[(i + 1) % n]);
    }
    area2_ = recompute_signed_area2();
  }

  std::size_t size() const { return next_.size(); }
  std::size_t next(std::size_t v) const { return next_[v]; }
  std::size_t prev(std::size_t v) const { return prev_[v]; }
  const Point& point(std::size_t v) const { return pts_[v]; }
  const NeighborhoodOptions& options() const { return options_; }

  TwiceArea signed_area2() const { return area2_; }
  TwiceArea area2() const { return abs_wide(area2_); }

  TwiceArea recompute_signed_area2() const {
    wide_t sum = 0;
    std::size_t v = 0;
    do {
      sum += cross0(v, next_[v]);
      v = next_[v];
    } while (v != 0);
    return sum;
  }

  /// Walks the cycle from vertex 0 in the current direction.
  Polygonization to_polygonization() const {
    Polygonization poly{id_, {}};
    poly.order.reserve(size());
    std::size_t v = 0;
    do {
      poly.order.push_back(v);
      v = next_[v];
    } while (v != 0);
    return poly;
  }

  /// Objective value after applying a move with signed delta `delta2`.
  TwiceArea area2_after(TwiceArea delta2) const { return abs_wide(area2_ + delta2); }

  TwiceArea relocate_delta(std::size_t k, std::size_t p) const {
    const std::size_t u = prev_[k];
    const std::size_t w = next_[k];
    return cross(pts_[p], pts_[k], pts_[next_[p]]) - cross(pts_[u], pts_[k], pts_[w]);
  }

  bool relocate_valid(std::size_t k, std::size_t p) const {
    return size() >= 4 && p != k && p != prev_[k];
  }

  /// Visits every 2-opt partner b of edge (a, next a) within the window,
  /// calling fn(b, delta2). Stops when fn returns false.
  template <typename Fn>
  void for_each_two_opt(std::size_t a, Fn&& fn) const {
    const std::size_t n = size();
    if (n < 4) return;
    const std::size_t first = next_[a];
    wide_t chain = 0;  // sum of cross0 over chain edges first..b
    std::size_t b = first;
    const std::size_t limit = std::min(options_.two_opt_window, n - 2);
    for (std::size_t len = 1; len < limit + 1; ++len) {
      const std::size_t nb = next_[b];
      if (len >= 2) {
        const std::size_t d = next_[b];
        if (d == a) break;
        const wide_t delta = -cross0(a, first) - cross0(b, d) + cross0(a, b) + cross0(first, d) - 2 * chain;
        if (!fn(b, static_cast<TwiceArea>(delta))) return;
      }
      chain += cross0(b, nb);
      b = nb;
      if (b == a) break;
    }
  }

  /// Exact delta of one 2-opt move, walking the reversed chain.
  TwiceArea two_opt_delta(std::size_t a, std::size_t b) const {
    const std::size_t first = next_[a];
    const std::size_t d = next_[b];
    wide_t chain = 0;
    for (std::size_t v = first; v != b; v = next_[v]) chain += cross0(v, next_[v]);
    return -cross0(a, first) - cross0(b, d) + cross0(a, b) + cross0(first, d) - 2 * chain;
  }

  /// Local simplicity check of the edges a move would create.
  bool feasible(const Move& m) {
    if (m.kind == Move::Kind::TwoOpt) {
      const std::size_t a = m.a;
      const std::size_t c = next_[a];
      const std::size_t b = m.b;
      const std::size_t d = next_[b];
      const EdgeKey removed[2] = {EdgeKey::of(a, c), EdgeKey::of(b, d)};
      const std::size_t added[2][2] = {{a, b}, {c, d}};
      return check_added(removed, added);
    }
    const std::size_t k = m.a;
    const std::size_t u = prev_[k];
    const std::size_t w = next_[k];
    const std::size_t p = m.b;
    const std::size_t q = next_[p];
    const EdgeKey removed[3] = {EdgeKey::of(u, k), EdgeKey::of(k, w), EdgeKey::of(p, q)};
    const std::size_t added[3][2] = {{u, w}, {p, k}, {k, q}};
    return check_added(removed, added);
  }

  void apply(const Move& m) {
    if (m.kind == Move::Kind::TwoOpt) {
      const std::size_t a = m.a;
      const std::size_t c = next_[a];
      const std::size_t b = m.b;
      const std::size_t d = next_[b];
      grid_.remove(a, c);
      grid_.remove(b, d);
      std::size_t v = c;
      while (true) {
        const std::size_t after = next_[v];
        std::swap(next_[v], prev_[v]);
        if (v == b) break;
        v = after;
      }
      next_[a] = b;
      prev_[b] = a;
      next_[c] = d;
      prev_[d] = c;
      grid_.add(a, b);
      grid_.add(c, d);
    } else {
      const std::size_t k = m.a;
      const std::size_t u = prev_[k];
      const std::size_t w = next_[k];
      const std::size_t p = m.b;
      const std::size_t q = next_[p];
      grid_.remove(u, k);
      grid_.remove(k, w);
      grid_.remove(p, q);
      next_[u] = w;
      prev_[w] = u;
      next_[p] = k;
      prev_[k] = p;
      next_[k] = q;
      prev_[q] = k;
      grid_.add(u, w);
      grid_.add(p, k);
      grid_.add(k, q);
    }
    area2_ += m.delta2;
  }

  /// Relocation targets p (edge (p, next p)) near vertex k.
  template <typename Fn>
  void for_each_relocation_target(std::size_t k, Fn&& fn) {
    targets_.clear();
    grid_.for_each_near_point(pts_[k], options_.relocate_radius, [&](const EdgeKey& e) {
      // Orient the undirected key to find the edge's start vertex.
      const std::size_t p = next_[e.u] == e.v ? e.u : e.v;
      if (relocate_valid(k, p)) targets_.push_back(p);
    });
    for (std::size_t p : targets_) {
      if (!fn(p)) return;
    }
  }

  /// Uniformly random relocation target near k, if one exists.
  std::optional<std::size_t> random_relocation_target(std::size_t k, SplitMix64& rng) {
    targets_.clear();
    grid_.for_each_near_point(pts_[k], options_.relocate_radius, [&](const EdgeKey& e) {
      const std::size_t p = next_[e.u] == e.v ? e.u : e.v;
      if (relocate_valid(k, p)) targets_.push_back(p);
    });
    if (targets_.empty()) return std::nullopt;
    return targets_[rng.below(targets_.size())];
  }

 private:
  wide_t cross0(std::size_t p, std::size_t q) const {
    return wide_t{pts_[p].x} * pts_[q].y - wide_t{pts_[q].x} * pts_[p].y;
  }

  bool pair_conflict(std::size_t x, std::size_t y, std::size_t s, std::size_t t) const {
    const bool sx = s == x || t == x;
    const bool sy = s == y || t == y;
    if (sx && sy) return true;
    if (sx) return adjacent_edges_overlap(pts_[x], pts_[y], pts_[s == x ? t : s]);
    if (sy) return adjacent_edges_overlap(pts_[y], pts_[x], pts_[s == y ? t : s]);
    return segments_interact(pts_[x], pts_[y], pts_[s], pts_[t]);
  }

  template <std::size_t R, std::size_t A>
  bool check_added(const EdgeKey (&removed)[R], const std::size_t (&added)[A][2]) const {
    for (std::size_t i = 0; i < A; ++i) {
      const std::size_t x = added[i][0];
      const std::size_t y = added[i][1];
      for (std::size_t j = i + 1; j < A; ++j) {
        if (pair_conflict(x, y, added[j][0], added[j][1])) return false;
      }
      const bool ok = grid_.for_each_near_segment(pts_[x], pts_[y], [&](const EdgeKey& e) {
        for (const EdgeKey& r : removed) {
          if (e == r) return true;
        }
        return !pair_conflict(x, y, e.u, e.v);
      });
      if (!ok) return false;
    }
    return true;
  }

  std::span<const Point> pts_;
  std::string id_;
  NeighborhoodOptions options_;
  std::vector<std::size_t> next_;
  std::vector<std::size_t> prev_;
  EdgeGrid grid_;
  TwiceArea area2_ = 0;
  std::vector<std::size_t> targets_;
};

}  // namespace polyarea
