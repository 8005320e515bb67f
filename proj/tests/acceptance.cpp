// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "polyarea/cli.hpp"
#include "polyarea/construct.hpp"
#include "polyarea/exact.hpp"
#include "polyarea/io.hpp"
#include "polyarea/lattice.hpp"
#include "polyarea/scoring.hpp"

using namespace polyarea;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "polyarea");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (code != 0) std::cerr << err.str();
  return code;
}

fs::path scratch() {
  static const fs::path dir = [] {
    const auto d = fs::temp_directory_path() / ("polyarea_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Boundary and interior lattice points of the hull that are not input points.
std::pair<wide_t, wide_t> hull_gap_by_enumeration(const Instance& inst) {
  std::vector<Point> ring;
  for (auto h : convex_hull(inst.points)) ring.push_back(inst[h]);
  const auto lat = oracle::enumerate_lattice(ring);
  wide_t on = 0, in = 0;
  for (const auto& p : inst.points) {
    const int k = oracle::classify(ring, p);
    on += k == 0;
    in += k == 1;
  }
  return {lat.boundary - on, lat.interior - in};
}

Verdict pick_identity() {
  const auto start = Clock::now();
  std::size_t checked = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const auto inst = oracle::random_instance(3 + t % 38, 100, 10'000 + t);
    const auto poly = random_polygonization(inst, t);
    const auto ring = oracle::ring_of(poly, inst);
    if (!oracle::simple_naive(ring)) return {false, "non-simple polygon at trial " + std::to_string(t)};
    const wide_t i_enum = oracle::enumerate_lattice(ring).interior;
    const wide_t b = boundary_lattice_count(poly, inst);
    if (polygon_area2(poly, inst) != b + 2 * i_enum - 2) {
      return {false, "identity fails at trial " + std::to_string(t)};
    }
    ++checked;
  }
  const double secs = seconds_since(start);
  return {secs < 30.0, std::to_string(checked) + " polygons, " + fmt(secs) + " s (limit 30 s)"};
}

Verdict fig2_consistency() {
  std::size_t found = 0;
  // Two hand-made polygons, then every random polygonization that happens
  // to have b = 11 and i = 6 by enumeration.
  std::vector<std::pair<Instance, Polygonization>> cases;
  for (const auto& inst : {oracle::make({{3, 3}, {5, 5}, {5, 0}, {6, 5}, {4, 6}, {0, 5}}, "hex"),
                           oracle::make({{0, 0}, {7, 0}, {0, 3}}, "tri")}) {
    Polygonization p{inst.id, std::vector<std::size_t>(inst.size())};
    std::iota(p.order.begin(), p.order.end(), std::size_t{0});
    cases.emplace_back(inst, p);
  }
  for (std::uint64_t seed = 0; seed < 20000 && cases.size() < 202; ++seed) {
    const auto inst = oracle::random_instance(3 + seed % 9, 6, seed);
    const auto poly = random_polygonization(inst, seed);
    const auto lat = oracle::enumerate_lattice(oracle::ring_of(poly, inst));
    if (lat.boundary == 11 && lat.interior == 6) cases.emplace_back(inst, poly);
  }
  for (const auto& [inst, poly] : cases) {
    const auto lat = oracle::enumerate_lattice(oracle::ring_of(poly, inst));
    if (lat.boundary != 11 || lat.interior != 6) return {false, "test polygon does not have b = 11, i = 6"};
    const LatticeStats s = lattice_stats(poly, inst);
    if (s.b != 11 || s.i != 6 || s.area2 != 21 || polygon_area2(poly, inst) != 21) {
      return {false, "polygon " + serialize_solution(poly) + " does not give twice-area 21"};
    }
    if (to_decimal(Rational(to_big(polygon_area2(poly, inst)), 2), 1) != "10.5") return {false, "area is not 10.5"};
    ++found;
  }
  return {found >= 10, std::to_string(found) + " polygons with b = 11, i = 6 all have area 10.5"};
}

Verdict lattice_bounds() {
  const auto start = Clock::now();
  for (std::uint64_t t = 0; t < 200; ++t) {
    const std::size_t n = 3 + t % 6;
    const auto inst = oracle::random_instance(n, 4 + t % 12, 20'000 + t);
    const auto [h_b, h_i] = hull_gap_by_enumeration(inst);
    const wide_t lo = static_cast<wide_t>(n) - 2;
    const wide_t hi = static_cast<wide_t>(n) + h_b + 2 * h_i - 2;
    const TwiceArea mn = exact_optimum(inst, Objective::Min).optimum2;
    const TwiceArea mx = exact_optimum(inst, Objective::Max).optimum2;
    const auto brute = oracle::brute_polygonizations(inst);
    if (mn != brute.min2 || mx != brute.max2) return {false, "exact optimum disagrees with brute force, trial " + std::to_string(t)};
    if (mn < lo || mx > hi) return {false, "bound violated at trial " + std::to_string(t)};
  }
  const double secs = seconds_since(start);
  return {secs < 120.0, "200 instances within [n-2, n+h_b+2h_i-2], " + fmt(secs) + " s (limit 120 s)"};
}

Verdict half_guarantee() {
  const auto start = Clock::now();
  const unsigned threads = resolve_threads();
  auto over_half = [&](const Instance& inst, std::string& why) {
    const auto poly = max_area_approx(inst, threads);
    if (!oracle::simple_naive(oracle::ring_of(poly, inst))) {
      why = "non-simple result on " + inst.id;
      return false;
    }
    std::vector<Point> hull;
    for (auto h : convex_hull(inst.points)) hull.push_back(inst[h]);
    const Rational s(to_big(oracle::shoelace2(oracle::ring_of(poly, inst))), to_big(oracle::shoelace2(hull)));
    if (!(s > Rational(1, 2))) {
      why = "score " + to_decimal(s) + " on " + inst.id;
      return false;
    }
    return true;
  };
  std::string why;
  std::size_t uniform = 0, ortho = 0, thin = 0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    const std::size_t n = 3 + (k * 37) % 198;
    if (!over_half(gen_uniform(n, static_cast<coord_t>(10 * n), k), why)) return {false, "(a) " + why};
    ++uniform;
  }
  for (std::uint64_t k = 0; k < 200; ++k) {
    const std::size_t n = 3 + (k * 13) % 198;
    const std::size_t lines = 2 + k % 9;
    const coord_t extent = static_cast<coord_t>(std::max<std::size_t>(n, 2 * n / lines));
    if (!over_half(gen_ortho(n, lines, k, extent), why)) return {false, "(b) " + why};
    ++ortho;
  }
  for (coord_t t : {1, 10, 100, 1000}) {
    for (coord_t shrink : {900, 950, 990, 999}) {
      for (int layers : {1, 2, 3, 5}) {
        const auto inst = oracle::nested_triangles(t, layers, shrink);
        ApproxReport report;
        max_area_approx(inst, threads, &report);
        if (2 * report.best_star_area2 > report.hull_area2) {
          return {false, "(c) family is not tight: a star polygon already exceeds one half"};
        }
        if (!over_half(inst, why)) return {false, "(c) " + why};
        ++thin;
      }
    }
  }
  const double secs = seconds_since(start);
  return {secs < 300.0, std::to_string(uniform) + " uniform, " + std::to_string(ortho) + " ortho, " +
                            std::to_string(thin) + " nested-triangle instances above 1/2, " + fmt(secs) +
                            " s (limit 300 s)"};
}

Verdict oracle_equivalence() {
  const auto start = Clock::now();
  cli::SolveConfig cfg;
  cfg.objective = Objective::Min;
  cfg.chain = cli::parse_chain("greedy+hc");
  cfg.restarts = 8;
  cfg.threads = resolve_threads();
  std::size_t hits = 0;
  const std::size_t trials = 200;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto inst = oracle::random_instance(3 + t % 6, 20, 30'000 + t);
    cfg.seed = t;
    const auto poly = cli::solve(inst, cfg);
    const auto ring = oracle::ring_of(poly, inst);
    if (!oracle::simple_naive(ring)) return {false, "non-simple result at trial " + std::to_string(t)};
    const wide_t got = oracle::shoelace2(ring);
    const wide_t best = oracle::brute_polygonizations(inst).min2;
    if (got < best) return {false, "heuristic beat the exact optimum at trial " + std::to_string(t)};
    hits += got == best;
  }
  const double secs = seconds_since(start);
  return {hits * 100 >= trials * 90 && secs < 300.0,
          std::to_string(hits) + "/" + std::to_string(trials) + " optimal (need 90%), none better, " + fmt(secs) +
              " s (limit 300 s)"};
}

Verdict verifier_agreement() {
  SplitMix64 rng(77);
  std::size_t simple = 0, crossing = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const std::size_t n = 3 + rng.below(30);
    const coord_t extent = t % 2 ? 6 : 1000;
    if (static_cast<std::size_t>((extent + 1) * (extent + 1)) < n) continue;
    const auto inst = oracle::random_instance(n, extent, rng());
    Polygonization poly;
    if (t % 3 == 0) {
      poly = random_polygonization(inst, rng());
    } else {
      poly = {inst.id, std::vector<std::size_t>(n)};
      std::iota(poly.order.begin(), poly.order.end(), std::size_t{0});
      if (t % 3 == 1) {
        rng.shuffle(std::span<std::size_t>(poly.order));
      } else {
        poly = random_polygonization(inst, rng());
        const std::size_t i = rng.below(n), j = rng.below(n);
        std::swap(poly.order[i], poly.order[j]);
      }
    }
    const bool fast = is_simple(poly, inst).simple;
    const bool slow = is_simple_reference(poly, inst).simple;
    if (fast != slow || fast != oracle::simple_naive(oracle::ring_of(poly, inst))) {
      return {false, "disagreement at trial " + std::to_string(t)};
    }
    (fast ? simple : crossing)++;
  }
  return {simple >= 100 && crossing >= 100,
          std::to_string(simple) + " simple and " + std::to_string(crossing) + " crossing permutations agree"};
}

Verdict scoring_semantics() {
  // Range over feasible and infeasible submissions.
  for (std::uint64_t t = 0; t < 300; ++t) {
    const auto inst = oracle::random_instance(3 + t % 40, 100, 40'000 + t);
    auto poly = t % 2 ? greedy_insertion(inst, t % 4 == 1 ? Objective::Min : Objective::Max, t)
                      : random_polygonization(inst, t);
    if (t % 5 == 0) std::reverse(poly.order.begin() + 1, poly.order.begin() + 1 + (poly.order.size() - 1) / 2);
    for (auto obj : {Objective::Min, Objective::Max}) {
      const Rational s = score(poly, inst, obj).score();
      if (s < 0 || s > 1) return {false, "score outside [0, 1]"};
    }
  }
  // Defaults.
  const auto sq = oracle::make({{0, 0}, {2, 0}, {2, 2}, {0, 2}}, "sq");
  const Polygonization bow{"sq", {0, 2, 1, 3}};
  const Polygonization repeat{"sq", {0, 1, 1, 3}};
  for (const auto& bad : {bow, repeat}) {
    const auto lo = score(bad, sq, Objective::Min), hi = score(bad, sq, Objective::Max);
    if (lo.feasible || hi.feasible || lo.score() != 1 || hi.score() != 0) return {false, "infeasible default"};
  }
  // Best-of with timestamp tie-break against a direct selection.
  SplitMix64 rng(5);
  for (int round = 0; round < 200; ++round) {
    const Objective obj = round % 2 ? Objective::Max : Objective::Min;
    std::vector<Submission> subs;
    const std::size_t k = 1 + rng.below(8);
    for (std::size_t i = 0; i < k; ++i) {
      ScoreReport r = defaulted_report("x", obj, 12);
      r.feasible = rng.below(4) != 0;
      r.defaulted = !r.feasible;
      if (r.feasible) r.area2 = static_cast<TwiceArea>(1 + rng.below(12));
      subs.push_back({r, static_cast<std::int64_t>(rng.below(5))});
    }
    const Submission* want = nullptr;
    for (const auto& s : subs) {
      if (!s.report.feasible) continue;
      if (!want) {
        want = &s;
        continue;
      }
      const bool better_area = obj == Objective::Min ? s.report.area2 < want->report.area2
                                                     : s.report.area2 > want->report.area2;
      if (better_area || (s.report.area2 == want->report.area2 && s.timestamp < want->timestamp)) want = &s;
    }
    const auto got = best_of(subs, "x", obj);
    if (!want) {
      if (got.feasible || got.score() != (obj == Objective::Min ? 1 : 0)) return {false, "best-of default"};
    } else if (got.area2 != want->report.area2 || !got.feasible) {
      return {false, "best-of selection"};
    }
  }
  // Convex position: the hull is the only polygonization and scores 1.
  for (std::size_t k = 3; k <= 60; ++k) {
    const auto inst = oracle::convex_instance(k);
    const Polygonization hull{inst.id, convex_hull(inst.points)};
    for (auto obj : {Objective::Min, Objective::Max}) {
      if (score(hull, inst, obj).score() != 1) return {false, "convex hull polygon does not score 1"};
    }
  }
  return {true, "range, defaults, best-of tie-break and convex hull score checked"};
}

Verdict scale() {
  const auto dir = scratch();
  // 10^6 points: generate, build a star polygon, verify through the CLI.
  {
    const auto inst = gen_uniform(1'000'000, 10'000'000, 8);
    const auto poly = star_polygonization(inst, convex_hull(inst.points).front());
    write_file(dir / "big.txt", serialize_instance(inst));
    write_file(dir / "big.sol", serialize_solution({"big", poly.order}));
  }
  const auto t0 = Clock::now();
  std::string out;
  const int code = run_cli({"verify", (dir / "big.txt").string(), (dir / "big.sol").string()}, &out);
  const double verify_secs = seconds_since(t0);
  if (code != 0) return {false, "verify of n = 10^6 failed: " + out};

  // 10^5 points with the default MIN chain.
  write_file(dir / "mid.txt", serialize_instance(gen_uniform(100'000, 1'000'000, 9)));
  const auto t1 = Clock::now();
  const int solve_code = run_cli({"solve", (dir / "mid.txt").string(), "--min", "--budget-ms", "600000", "-o",
                                  (dir / "mid.min.sol").string()},
                                 &out);
  const double solve_secs = seconds_since(t1);
  if (solve_code != 0) return {false, "solve on n = 10^5 failed"};
  const auto inst = load_instance(dir / "mid.txt");
  const auto poly = load_solution(dir / "mid.min.sol");
  const auto report = score(poly, inst, Objective::Min);
  const bool ok = verify_secs < 60.0 && report.feasible && report.score() < Rational(1, 2) && solve_secs < 900.0;
  return {ok, "verify n=10^6 " + fmt(verify_secs) + " s (limit 60 s); MIN n=10^5 score " + to_decimal(report.score()) +
                  " in " + fmt(solve_secs) + " s (limits 0.5, 900 s)"};
}

Verdict determinism() {
  const auto dir = scratch();
  const auto generated = gen_uniform(2000, 20000, 4);
  write_file(dir / "det.txt", serialize_instance(generated));
  const std::string inst = (dir / "det.txt").string();
  const std::string anchor = std::to_string(convex_hull(generated.points).front());
  const std::vector<std::vector<std::string>> configs = {
      {"--min"},
      {"--max"},
      {"--min", "--algo", "random+sa", "--seed", "17"},
      {"--max", "--algo", "star+hc", "--anchor", anchor},
      {"--min", "--algo", "greedy+hc+sa", "--moves", "20000", "--restarts", "4", "--seed", "3"},
      {"--max", "--algo", "approx-max+sa", "--moves", "20000", "--restarts", "3", "--threads", "3"},
  };
  std::size_t checked = 0;
  for (const auto& cfg : configs) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const auto sol = (dir / ("det" + std::to_string(rep) + ".sol")).string();
      std::vector<std::string> args{"solve", inst, "-o", sol};
      args.insert(args.end(), cfg.begin(), cfg.end());
      if (run_cli(args) != 0) return {false, "solve failed"};
      const auto bytes = read_file(sol);
      if (rep == 0) {
        first = bytes;
      } else if (bytes != first) {
        return {false, "solution files differ for config " + std::to_string(checked)};
      }
    }
    ++checked;
  }
  return {true, std::to_string(checked) + " solve configurations byte-identical on repeat"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 pick identity", pick_identity},
      {"2 b=11 i=6 gives area 10.5", fig2_consistency},
      {"3 lattice area bounds", lattice_bounds},
      {"4 max-area approximation above 1/2", half_guarantee},
      {"5 greedy+hc matches exact optimum", oracle_equivalence},
      {"6 sweep and quadratic verifiers agree", verifier_agreement},
      {"7 scoring semantics", scoring_semantics},
      {"8 scale", scale},
      {"9 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
    failures += !v.pass;
  }
  fs::remove_all(scratch());
  return failures == 0 ? 0 : 1;
}
