#pragma once
// Exhaustive enumeration of simple polygonizations for small instances.
// Orders are canonical: vertex 0 first, and order[1] < order[n-1], so each
// polygon is produced once regardless of rotation and direction.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyarea/error.hpp"
#include "polyarea/geom.hpp"
#include "polyarea/parallel.hpp"
#include "polyarea/polygon.hpp"

namespace polyarea {

inline constexpr std::size_t kDefaultExactCap = 10;

struct ExactResult {
  TwiceArea optimum2 = 0;
  Polygonization witness;
  std::uint64_t count_simple = 0;
};

namespace detail {

inline void require_enumerable(const Instance& inst, std::size_t cap) {
  if (inst.size() > cap) {
    throw InstanceTooLarge("exact search is capped at " + std::to_string(cap) + " points, instance has " +
                           std::to_string(inst.size()));
  }
  convex_hull(inst.points);  // throws AllCollinear / InvalidArgument
}

// Depth-first search over simple paths starting at vertex 0. Vertices are
// tried in increasing index order, so completions arrive in lexicographic
// order. `fn(order, area2)` receives each canonical simple cycle.
class PathSearch {
 public:
  explicit PathSearch(const Instance& inst) : pts_(inst.points), n_(inst.size()), used_(n_, false) {
    order_.reserve(n_);
  }

  template <typename Fn>
  void run(std::size_t second, Fn& fn) {
    order_.assign({0, second});
    used_.assign(n_, false);
    used_[0] = used_[second] = true;
    extend(cross0(0, second), fn);
  }

 private:
  wide_t cross0(std::size_t p, std::size_t q) const {
    return wide_t{pts_[p].x} * pts_[q].y - wide_t{pts_[q].x} * pts_[p].y;
  }

  // Edge k runs order[k] -> order[k+1]; the candidate is edge m = size-1
  // from `tail` to `v`. `closing` marks the edge back to vertex 0.
  bool edge_ok(std::size_t tail, std::size_t v, bool closing) const {
    const std::size_t m = order_.size() - 1;
    const Point& a = pts_[tail];
    const Point& b = pts_[v];
    if (adjacent_edges_overlap(a, pts_[order_[m - 1]], b)) return false;
    if (closing && adjacent_edges_overlap(b, a, pts_[order_[1]])) return false;
    const std::size_t first = closing ? 1 : 0;
    for (std::size_t k = first; k + 1 < m; ++k) {
      if (segments_interact(pts_[order_[k]], pts_[order_[k + 1]], a, b)) return false;
    }
    return true;
  }

  template <typename Fn>
  void extend(wide_t partial, Fn& fn) {
    const std::size_t tail = order_.back();
    if (order_.size() == n_) {
      if (order_[1] < tail && edge_ok(tail, 0, true)) fn(order_, abs_wide(partial + cross0(tail, 0)));
      return;
    }
    for (std::size_t v = 1; v < n_; ++v) {
      if (used_[v] || !edge_ok(tail, v, false)) continue;
      // The last vertex must exceed order[1]; leave room for one.
      if (order_.size() + 1 == n_ && v < order_[1]) continue;
      used_[v] = true;
      order_.push_back(v);
      extend(partial + cross0(tail, v), fn);
      order_.pop_back();
      used_[v] = false;
    }
  }

  std::span<const Point> pts_;
  std::size_t n_;
  std::vector<bool> used_;
  std::vector<std::size_t> order_;
};

}  // namespace detail

/// Calls fn(const std::vector<std::size_t>& order, TwiceArea area2) once per
/// simple polygonization, in lexicographic order of canonical orders.
template <typename Fn>
void enumerate_polygonizations(const Instance& inst, Fn&& fn, std::size_t cap = kDefaultExactCap) {
  detail::require_enumerable(inst, cap);
  detail::PathSearch search(inst);
  for (std::size_t second = 1; second + 1 < inst.size(); ++second) search.run(second, fn);
}

inline std::vector<Polygonization> list_polygonizations(const Instance& inst, std::size_t cap = kDefaultExactCap) {
  std::vector<Polygonization> out;
  enumerate_polygonizations(
      inst, [&](const std::vector<std::size_t>& order, TwiceArea) { out.push_back({inst.id, order}); }, cap);
  return out;
}

/// Optimum, lexicographically smallest optimal order, and the number of
/// simple polygonizations. Subtrees by second vertex run in parallel.
inline ExactResult exact_optimum(const Instance& inst, Objective objective, std::size_t cap = kDefaultExactCap,
                                 unsigned threads = 1) {
  detail::require_enumerable(inst, cap);
  const std::size_t n = inst.size();
  const std::size_t branches = n - 2;  // second vertex in [1, n-2]

  struct Branch {
    std::uint64_t count = 0;
    std::optional<TwiceArea> best;
    std::vector<std::size_t> order;
  };
  std::vector<Branch> results(branches);
  parallel_for(branches, threads, [&](std::size_t i) {
    Branch& br = results[i];
    detail::PathSearch search(inst);
    auto visit = [&](const std::vector<std::size_t>& order, TwiceArea area2) {
      ++br.count;
      if (!br.best || better(objective, area2, *br.best)) {
        br.best = area2;
        br.order = order;
      }
    };
    search.run(i + 1, visit);
  });

  ExactResult result;
  std::optional<TwiceArea> best;
  for (const Branch& br : results) {
    result.count_simple += br.count;
    if (br.best && (!best || better(objective, *br.best, *best))) {
      best = br.best;
      result.witness = {inst.id, br.order};
    }
  }
  if (!best) throw ConstructionFailure("no simple polygonization found");
  result.optimum2 = *best;
  return result;
}

inline std::uint64_t count_polygonizations(const Instance& inst, std::size_t cap = kDefaultExactCap,
                                           unsigned threads = 1) {
  return exact_optimum(inst, Objective::Min, cap, threads).count_simple;
}

}  // namespace polyarea
