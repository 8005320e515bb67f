#pragma once
// Local search over simple polygonizations with two move kinds: 2-opt chain
// reversal and single-vertex relocation. Feasibility and objective values
// are exact; the only floating-point step is the annealing acceptance draw.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include "polyarea/error.hpp"
#include "polyarea/polygon.hpp"
#include "polyarea/rng.hpp"
#include "polyarea/tour.hpp"

namespace polyarea {

struct SearchBudget {
  std::optional<std::int64_t> max_millis;
  /// Applied moves for hill climbing, proposals for annealing.
  std::optional<std::uint64_t> max_moves;
  std::uint64_t seed = 0;

  void validate() const {
    if (!max_millis && !max_moves) throw InvalidArgument("search budget needs a time or move cap");
    if (max_millis && *max_millis < 0) throw InvalidArgument("negative time budget");
  }
};

struct AnnealingSchedule {
  /// Initial temperature in twice-area units; unset selects area2 / n.
  std::optional<double> t0;
  double alpha = 0.999;
  /// Proposals per cooling step; 0 selects n.
  std::size_t batch = 0;
  /// Batches without a new incumbent before restarting from it.
  std::size_t stagnation_batches = 20;

  void validate() const {
    if (t0 && !(*t0 > 0.0)) throw InvalidArgument("annealing t0 must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("annealing alpha must lie in (0, 1)");
  }
};

namespace detail {

class Deadline {
 public:
  explicit Deadline(const SearchBudget& budget)
      : budget_(budget), start_(std::chrono::steady_clock::now()) {}

  bool out_of_moves(std::uint64_t moves) const { return budget_.max_moves && moves >= *budget_.max_moves; }

  bool out_of_time() const {
    if (!budget_.max_millis) return false;
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() >= *budget_.max_millis;
  }

 private:
  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
};

inline void require_simple(const Polygonization& poly, const Instance& inst) {
  if (!is_simple(poly, inst)) throw NotSimple("local search requires a simple starting polygon");
}

}  // namespace detail

/// First-improvement local search; the objective never gets worse.
inline Polygonization hill_climb(const Polygonization& poly, const Instance& inst, Objective objective,
                                 const SearchBudget& budget,
                                 std::optional<NeighborhoodOptions> neighborhood = std::nullopt) {
  budget.validate();
  detail::require_simple(poly, inst);
  const std::size_t n = inst.size();
  if (n < 4) return poly;

  Tour tour(inst, poly, neighborhood.value_or(default_neighborhood(n)));
  SplitMix64 rng(budget.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));

  const detail::Deadline deadline(budget);
  std::uint64_t moves = 0;

  auto try_relocate = [&](std::size_t k) {
    bool applied = false;
    tour.for_each_relocation_target(k, [&](std::size_t p) {
      const TwiceArea d = tour.relocate_delta(k, p);
      if (!better(objective, tour.area2_after(d), tour.area2())) return true;
      const Move m = Move::relocate(k, p, d);
      if (!tour.feasible(m)) return true;
      tour.apply(m);
      applied = true;
      return false;
    });
    return applied;
  };
  auto try_two_opt = [&](std::size_t a) {
    bool applied = false;
    tour.for_each_two_opt(a, [&](std::size_t b, TwiceArea d) {
      if (!better(objective, tour.area2_after(d), tour.area2())) return true;
      const Move m = Move::two_opt(a, b, d);
      if (!tour.feasible(m)) return true;
      tour.apply(m);
      applied = true;
      return false;
    });
    return applied;
  };

  bool improved = true;
  std::size_t checks = 0;
  while (improved) {
    improved = false;
    for (std::size_t k : order) {
      if (deadline.out_of_moves(moves)) return tour.to_polygonization();
      if ((++checks & 7) == 0 && deadline.out_of_time()) return tour.to_polygonization();
      const bool relocate_first = rng.below(2) == 0;
      const bool applied = relocate_first ? (try_relocate(k) || try_two_opt(k)) : (try_two_opt(k) || try_relocate(k));
      if (applied) {
        ++moves;
        improved = true;
      }
    }
  }
  return tour.to_polygonization();
}

namespace detail {

/// One random candidate move around a random vertex, without feasibility.
inline std::optional<Move> random_move(Tour& tour, SplitMix64& rng) {
  const std::size_t n = tour.size();
  const std::size_t k = rng.below(n);
  if (rng.below(2) == 0) {
    const auto p = tour.random_relocation_target(k, rng);
    if (!p) return std::nullopt;
    return Move::relocate(k, *p, tour.relocate_delta(k, *p));
  }
  const std::size_t longest = std::min(tour.options().two_opt_window, n - 2);
  if (longest < 2) return std::nullopt;
  const std::size_t len = 2 + rng.below(longest - 1);
  std::size_t b = tour.next(k);
  for (std::size_t i = 1; i < len; ++i) b = tour.next(b);
  if (tour.next(b) == k) return std::nullopt;
  return Move::two_opt(k, b, tour.two_opt_delta(k, b));
}

}  // namespace detail

/// Annealing with incumbent tracking; the result is never worse than `poly`.
inline Polygonization simulated_annealing(const Polygonization& poly, const Instance& inst, Objective objective,
                                          const SearchBudget& budget, AnnealingSchedule schedule = {},
                                          std::optional<NeighborhoodOptions> neighborhood = std::nullopt) {
  budget.validate();
  schedule.validate();
  detail::require_simple(poly, inst);
  const std::size_t n = inst.size();
  if (n < 4) return poly;

  const NeighborhoodOptions hood = neighborhood.value_or(default_neighborhood(n));
  auto tour = std::make_unique<Tour>(inst, poly, hood);
  SplitMix64 rng(budget.seed);
  const detail::Deadline deadline(budget);

  double temperature = schedule.t0.value_or(static_cast<double>(tour->area2()) / static_cast<double>(n));
  const std::size_t batch = schedule.batch > 0 ? schedule.batch : n;
  const bool eager_snapshots = n <= 4096;

  Polygonization incumbent = poly;
  TwiceArea incumbent_area = tour->area2();
  std::size_t stagnant = 0;
  bool improved_in_batch = false;

  for (std::uint64_t proposals = 0;; ++proposals) {
    if (deadline.out_of_moves(proposals)) break;
    if ((proposals & 255) == 0 && deadline.out_of_time()) break;

    if (proposals > 0 && proposals % batch == 0) {
      if (!eager_snapshots && better(objective, tour->area2(), incumbent_area)) {
        incumbent = tour->to_polygonization();
        incumbent_area = tour->area2();
        improved_in_batch = true;
      }
      temperature *= schedule.alpha;
      stagnant = improved_in_batch ? 0 : stagnant + 1;
      improved_in_batch = false;
      if (stagnant >= schedule.stagnation_batches) {
        tour = std::make_unique<Tour>(inst, incumbent, hood);
        stagnant = 0;
      }
    }

    const auto move = detail::random_move(*tour, rng);
    if (!move) continue;
    const TwiceArea before = tour->area2();
    const TwiceArea after = tour->area2_after(move->delta2);
    const TwiceArea worsening = objective == Objective::Min ? after - before : before - after;
    if (worsening > 0) {
      const double p = std::exp(-static_cast<double>(worsening) / temperature);
      if (!(rng.unit() < p)) continue;
    }
    if (!tour->feasible(*move)) continue;
    tour->apply(*move);
    if (eager_snapshots && better(objective, tour->area2(), incumbent_area)) {
      incumbent = tour->to_polygonization();
      incumbent_area = tour->area2();
      improved_in_batch = true;
    }
  }
  if (better(objective, tour->area2(), incumbent_area)) incumbent = tour->to_polygonization();
  return incumbent;
}

/// Every feasible move of the current neighborhood with its exact delta,
/// best objective value first.
inline std::vector<Move> propose_moves(const Polygonization& poly, const Instance& inst, Objective objective,
                                       std::optional<NeighborhoodOptions> neighborhood = std::nullopt) {
  detail::require_simple(poly, inst);
  std::vector<Move> moves;
  const std::size_t n = inst.size();
  if (n < 4) return moves;
  Tour tour(inst, poly, neighborhood.value_or(default_neighborhood(n)));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> targets;
    tour.for_each_relocation_target(k, [&](std::size_t p) {
      targets.push_back(p);
      return true;
    });
    for (std::size_t p : targets) {
      const Move m = Move::relocate(k, p, tour.relocate_delta(k, p));
      if (tour.feasible(m)) moves.push_back(m);
    }
    tour.for_each_two_opt(k, [&](std::size_t b, TwiceArea d) {
      const Move m = Move::two_opt(k, b, d);
      if (tour.feasible(m)) moves.push_back(m);
      return true;
    });
  }
  const TwiceArea base = tour.signed_area2();
  std::stable_sort(moves.begin(), moves.end(), [&](const Move& x, const Move& y) {
    return better(objective, abs_wide(base + x.delta2), abs_wide(base + y.delta2));
  });
  return moves;
}

/// Applies one move to a polygonization; the caller guarantees feasibility.
inline Polygonization apply_move(const Polygonization& poly, const Instance& inst, const Move& m) {
  Tour tour(inst, poly, default_neighborhood(inst.size()));
  tour.apply(m);
  return tour.to_polygonization();
}

namespace detail {

/// Unbiased walk: every feasible proposal is taken.
inline void random_walk(Tour& tour, std::uint64_t proposals, SplitMix64& rng) {
  if (tour.size() < 4) return;
  for (std::uint64_t i = 0; i < proposals; ++i) {
    const auto move = random_move(tour, rng);
    if (move && tour.feasible(*move)) tour.apply(*move);
  }
}

}  // namespace detail

}  // namespace polyarea
