#pragma once
// Contest scoring: polygon area over hull area, exact rationals throughout.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyarea/error.hpp"
#include "polyarea/geom.hpp"
#include "polyarea/polygon.hpp"

namespace polyarea {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt to_big(wide_t v) {
  const bool negative = v < 0;
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(0) - static_cast<unsigned __int128>(v)
                                   : static_cast<unsigned __int128>(v);
  BigInt out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return negative ? BigInt(-out) : out;
}

struct ScoreReport {
  std::string instance_id;
  Objective objective = Objective::Min;
  bool feasible = false;
  bool defaulted = true;
  TwiceArea area2 = 0;
  TwiceArea hull_area2 = 0;

  /// area2 / hull_area2 when feasible, else 1 (MIN) or 0 (MAX).
  Rational score() const {
    if (!feasible) return Rational(objective == Objective::Min ? 1 : 0);
    return Rational(to_big(area2), to_big(hull_area2));
  }
};

inline ScoreReport defaulted_report(std::string instance_id, Objective objective, TwiceArea hull2 = 0) {
  ScoreReport r;
  r.instance_id = std::move(instance_id);
  r.objective = objective;
  r.hull_area2 = hull2;
  return r;
}

/// Infeasible submissions get the default score; only a solution for a
/// different instance is an error.
inline ScoreReport score(const Polygonization& poly, const Instance& inst, Objective objective) {
  if (!poly.instance_id.empty() && !inst.id.empty() && poly.instance_id != inst.id) {
    throw InstanceMismatch("solution is for instance '" + poly.instance_id + "', not '" + inst.id + "'");
  }
  if (poly.order.size() != inst.size()) {
    throw InstanceMismatch("solution has " + std::to_string(poly.order.size()) + " vertices, instance has " +
                           std::to_string(inst.size()));
  }
  ScoreReport r = defaulted_report(inst.id, objective, hull_area2(inst));
  try {
    if (!is_simple(poly, inst)) return r;
  } catch (const InvalidPermutation&) {
    return r;
  }
  r.feasible = true;
  r.defaulted = false;
  r.area2 = polygon_area2_unchecked(poly, inst);
  return r;
}

struct ScoreTotals {
  Rational min = 0;
  Rational max = 0;
  std::size_t min_count = 0;
  std::size_t max_count = 0;
};

/// Sum of scores per objective. Each (instance, objective) may appear once.
inline ScoreTotals aggregate(std::span<const ScoreReport> reports) {
  std::map<std::pair<std::string, Objective>, std::size_t> seen;
  ScoreTotals totals;
  for (const auto& r : reports) {
    if (!seen.emplace(std::make_pair(r.instance_id, r.objective), 0).second) {
      throw InvalidArgument("duplicate report for instance '" + r.instance_id + "' (" + to_string(r.objective) +
                            ")");
    }
    if (r.objective == Objective::Min) {
      totals.min += r.score();
      ++totals.min_count;
    } else {
      totals.max += r.score();
      ++totals.max_count;
    }
  }
  return totals;
}

struct Submission {
  ScoreReport report;
  std::int64_t timestamp = 0;
};

/// Best feasible submission for one instance; equal scores go to the
/// earliest timestamp. With no feasible submission the result is defaulted.
inline ScoreReport best_of(std::span<const Submission> submissions, std::string instance_id, Objective objective) {
  const Submission* best = nullptr;
  Rational best_score;
  for (const auto& s : submissions) {
    if (!s.report.feasible) continue;
    const Rational v = s.report.score();
    const bool wins = !best || (objective == Objective::Min ? v < best_score : v > best_score) ||
                      (v == best_score && s.timestamp < best->timestamp);
    if (wins) {
      best = &s;
      best_score = v;
    }
  }
  if (best) return best->report;
  TwiceArea hull2 = 0;
  for (const auto& s : submissions) hull2 = std::max(hull2, s.report.hull_area2);
  return defaulted_report(std::move(instance_id), objective, hull2);
}

/// Decimal rendering of a non-negative rational, rounded half-to-even.
inline std::string to_decimal(const Rational& value, unsigned places = 6) {
  if (value < 0) return "-" + to_decimal(-value, places);
  BigInt scale = 1;
  for (unsigned i = 0; i < places; ++i) scale *= 10;
  const BigInt num = boost::multiprecision::numerator(value) * scale;
  const BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;
  const BigInt twice_rem = 2 * (num % den);
  if (twice_rem > den || (twice_rem == den && (q & 1) != 0)) ++q;

  std::string digits = q.str();
  if (places == 0) return digits;
  if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
  digits.insert(digits.size() - places, 1, '.');
  return digits;
}

}  // namespace polyarea
