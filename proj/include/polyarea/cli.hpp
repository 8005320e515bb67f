#pragma once
// Command-line front end. run() is the whole program minus process setup,
// so it can be driven from tests with in-memory streams.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "polyarea/construct.hpp"
#include "polyarea/error.hpp"
#include "polyarea/exact.hpp"
#include "polyarea/io.hpp"
#include "polyarea/lattice.hpp"
#include "polyarea/optimize.hpp"
#include "polyarea/parallel.hpp"
#include "polyarea/polygon.hpp"
#include "polyarea/scoring.hpp"

namespace polyarea::cli {

enum ExitCode : int { kOk = 0, kInfeasible = 1, kUsage = 2, kInputError = 3 };

enum class Stage { Star, ApproxMax, Greedy, Random, Exact, HillClimb, Anneal };

inline bool is_constructor(Stage s) { return s != Stage::HillClimb && s != Stage::Anneal; }

inline std::vector<Stage> parse_chain(const std::string& text) {
  static const std::map<std::string, Stage> names = {
      {"star", Stage::Star},     {"approx-max", Stage::ApproxMax}, {"greedy", Stage::Greedy},
      {"random", Stage::Random}, {"exact", Stage::Exact},          {"hc", Stage::HillClimb},
      {"sa", Stage::Anneal}};
  std::vector<Stage> chain;
  std::stringstream in(text);
  std::string name;
  while (std::getline(in, name, '+')) {
    const auto it = names.find(name);
    if (it == names.end()) throw InvalidArgument("unknown algorithm '" + name + "'");
    chain.push_back(it->second);
  }
  if (chain.empty()) throw InvalidArgument("empty algorithm chain");
  if (!is_constructor(chain.front())) throw InvalidArgument("an algorithm chain must start with a constructor");
  for (std::size_t k = 1; k < chain.size(); ++k) {
    if (is_constructor(chain[k])) throw InvalidArgument("constructors may only start a chain");
  }
  return chain;
}

struct SolveConfig {
  Objective objective = Objective::Min;
  std::vector<Stage> chain;
  std::optional<std::int64_t> budget_ms;
  std::optional<std::uint64_t> moves;
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
  unsigned threads = 1;
  std::optional<std::size_t> anchor;
  std::size_t exact_cap = kDefaultExactCap;
};

/// One pass of the chain. Improver stages share the overall time budget.
inline Polygonization run_chain(const Instance& inst, const SolveConfig& cfg, std::uint64_t seed, unsigned threads) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const std::size_t n = inst.size();

  Polygonization poly;
  for (std::size_t k = 0; k < cfg.chain.size(); ++k) {
    const std::uint64_t stage_seed = derive_seed(seed, k);
    switch (cfg.chain[k]) {
      case Stage::Star:
        poly = star_polygonization(inst, cfg.anchor.value_or(convex_hull(inst.points).front()));
        break;
      case Stage::ApproxMax:
        poly = max_area_approx(inst, threads);
        break;
      case Stage::Greedy:
        poly = greedy_insertion(inst, cfg.objective, stage_seed);
        break;
      case Stage::Random:
        poly = random_polygonization(inst, stage_seed);
        break;
      case Stage::Exact:
        poly = exact_optimum(inst, cfg.objective, cfg.exact_cap, threads).witness;
        break;
      case Stage::HillClimb:
      case Stage::Anneal: {
        SearchBudget budget;
        budget.seed = stage_seed;
        if (cfg.budget_ms) {
          const auto used = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
          budget.max_millis = std::max<std::int64_t>(0, *cfg.budget_ms - used);
        }
        budget.max_moves = cfg.moves;
        if (!budget.max_moves && !budget.max_millis) {
          budget.max_moves = cfg.chain[k] == Stage::HillClimb ? 1000 * static_cast<std::uint64_t>(n)
                                                              : 200 * static_cast<std::uint64_t>(n);
        }
        poly = cfg.chain[k] == Stage::HillClimb ? hill_climb(poly, inst, cfg.objective, budget)
                                                : simulated_annealing(poly, inst, cfg.objective, budget);
        break;
      }
    }
    poly.instance_id = inst.id;
  }
  return poly;
}

/// Best of cfg.restarts seeded runs. Run 0 uses the seed itself, run k > 0
/// uses derive_seed(seed, k + 0x100); ties go to the lower run index.
inline Polygonization solve(const Instance& inst, const SolveConfig& cfg) {
  const std::size_t runs = std::max<std::size_t>(1, cfg.restarts);
  const unsigned inner = runs > 1 ? 1 : cfg.threads;
  std::vector<Polygonization> results(runs);
  std::vector<TwiceArea> areas(runs);
  parallel_for(runs, runs > 1 ? cfg.threads : 1, [&](std::size_t k) {
    const std::uint64_t seed = k == 0 ? cfg.seed : derive_seed(cfg.seed, k + 0x100);
    results[k] = run_chain(inst, cfg, seed, inner);
    areas[k] = polygon_area2(results[k], inst);
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs; ++k) {
    if (better(cfg.objective, areas[k], areas[best])) best = k;
  }
  return results[best];
}

inline std::string csv_header() { return "instance_id,objective,feasible,score,area2,hull_area2,millis"; }

inline std::string csv_row(const ScoreReport& r, std::int64_t millis) {
  return r.instance_id + "," + to_string(r.objective) + "," + (r.feasible ? "1" : "0") + "," + to_decimal(r.score()) +
         "," + to_string(r.area2) + "," + to_string(r.hull_area2) + "," + std::to_string(millis);
}

namespace detail {

inline std::int64_t millis_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

inline void emit(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
  } else {
    write_file(path, data);
  }
}

inline Objective objective_of(bool min, bool max) {
  if (min == max) throw InvalidArgument("exactly one of --min and --max is required");
  return min ? Objective::Min : Objective::Max;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Area-optimal simple polygonizations of point sets", "polyarea"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "polyarea 1.0.0");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  std::string gen_type = "uniform";
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  coord_t gen_extent = 0;
  std::string gen_raster;
  std::size_t gen_gridlines = 10;
  bool gen_even = false;
  std::string gen_out;
  gen->add_option("--type", gen_type, "uniform | illumination | edge | ortho")
      ->check(CLI::IsMember({"uniform", "illumination", "edge", "ortho"}));
  gen->add_option("-n,--points", gen_n, "Number of points")->required();
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--extent", gen_extent, "Coordinate range [0, extent] (uniform: default 10n; ortho: default n)");
  gen->add_option("--raster", gen_raster, "PGM image (illumination, edge)");
  gen->add_option("--gridlines", gen_gridlines, "Vertical lines (ortho)");
  gen->add_flag("--even", gen_even, "Double all coordinates");
  gen->add_option("-o,--output", gen_out, "Output file (default: stdout)");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Compute a polygonization");
  std::string solve_instance;
  std::string solve_algo;
  bool solve_min = false;
  bool solve_max = false;
  std::optional<std::int64_t> solve_budget;
  std::optional<std::uint64_t> solve_moves;
  SolveConfig cfg;
  unsigned solve_threads = 0;
  std::optional<std::size_t> solve_anchor;
  std::string solve_out;
  std::string solve_dir = ".";
  solve_cmd->add_option("instance", solve_instance, "Instance file")->required();
  solve_cmd->add_option("--algo", solve_algo, "Chain of star|approx-max|greedy|random|exact|hc|sa joined by '+'");
  solve_cmd->add_flag("--min", solve_min, "Minimize area");
  solve_cmd->add_flag("--max", solve_max, "Maximize area");
  solve_cmd->add_option("--budget-ms", solve_budget, "Time budget for improvement stages")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--moves", solve_moves, "Move cap per improvement stage");
  solve_cmd->add_option("--seed", cfg.seed, "RNG seed");
  solve_cmd->add_option("--restarts", cfg.restarts, "Independent seeded runs; the best is kept")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--threads", solve_threads, "Worker threads (default: POLYAREA_THREADS or core count)");
  solve_cmd->add_option("--anchor", solve_anchor, "Hull vertex for the star constructor");
  solve_cmd->add_option("--exact-cap", cfg.exact_cap, "Largest n accepted by the exact solver");
  solve_cmd->add_option("-o,--output", solve_out, "Solution file (default: <out-dir>/<id>.<min|max>.sol)");
  solve_cmd->add_option("--out-dir", solve_dir, "Directory for the default solution file name");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Check that a solution is a simple polygonization");
  std::string verify_instance;
  std::string verify_solution;
  verify_cmd->add_option("instance", verify_instance, "Instance file")->required();
  verify_cmd->add_option("solution", verify_solution, "Solution file")->required();

  // score
  auto* score_cmd = app.add_subcommand("score", "Score a directory of solutions as CSV");
  std::string score_instances;
  std::string score_solutions;
  std::string score_out;
  score_cmd->add_option("--instances", score_instances, "Directory of instance files")->required();
  score_cmd->add_option("--solutions", score_solutions, "Directory of <id>.<min|max>.sol files")->required();
  score_cmd->add_option("-o,--output", score_out, "CSV file (default: stdout)");

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "Lattice twice-area bounds for any polygonization");
  std::string bounds_instance;
  bounds_cmd->add_option("instance", bounds_instance, "Instance file")->required();

  // count
  auto* count_cmd = app.add_subcommand("count", "Count simple polygonizations of a small instance");
  std::string count_instance;
  std::size_t count_cap = kDefaultExactCap;
  unsigned count_threads = 0;
  count_cmd->add_option("instance", count_instance, "Instance file")->required();
  count_cmd->add_option("--cap", count_cap, "Largest n accepted");
  count_cmd->add_option("--threads", count_threads, "Worker threads");

  // svg
  auto* svg_cmd = app.add_subcommand("svg", "Render an instance and optional solution");
  std::string svg_instance;
  std::string svg_solution;
  std::string svg_out;
  svg_cmd->add_option("instance", svg_instance, "Instance file")->required();
  svg_cmd->add_option("--solution", svg_solution, "Solution file");
  svg_cmd->add_option("-o,--output", svg_out, "SVG file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      const GenOptions opt{gen_even};
      Instance inst;
      if (gen_type == "uniform") {
        const coord_t extent = gen_extent > 0 ? gen_extent : static_cast<coord_t>(10 * std::max<std::size_t>(gen_n, 1));
        inst = gen_uniform(gen_n, extent, gen_seed, opt);
      } else if (gen_type == "ortho") {
        inst = gen_ortho(gen_n, gen_gridlines, gen_seed, gen_extent, opt);
      } else {
        if (gen_raster.empty()) throw InvalidArgument("--raster is required for " + gen_type);
        const auto raster = parse_pgm(read_file(gen_raster));
        inst = gen_type == "edge" ? gen_edge(raster, gen_n, gen_seed, opt) : gen_illumination(raster, gen_n, gen_seed, opt);
      }
      detail::emit(gen_out, serialize_instance(inst), out);
      return kOk;
    }

    if (*solve_cmd) {
      cfg.objective = detail::objective_of(solve_min, solve_max);
      if (solve_algo.empty()) solve_algo = cfg.objective == Objective::Min ? "greedy+hc" : "approx-max+hc";
      cfg.chain = parse_chain(solve_algo);
      cfg.budget_ms = solve_budget;
      cfg.moves = solve_moves;
      cfg.threads = resolve_threads(solve_threads);
      cfg.anchor = solve_anchor;
      const auto start = std::chrono::steady_clock::now();
      const Instance inst = load_instance(solve_instance);
      validate_points(inst);
      const Polygonization poly = solve(inst, cfg);
      const ScoreReport report = score(poly, inst, cfg.objective);
      const std::string path = !solve_out.empty()
                                   ? solve_out
                                   : (std::filesystem::path(solve_dir) /
                                      (inst.id + "." + to_string(cfg.objective) + ".sol")).string();
      write_file(path, serialize_solution(poly));
      out << csv_row(report, detail::millis_since(start)) << '\n';
      return report.feasible ? kOk : kInfeasible;
    }

    if (*verify_cmd) {
      const Instance inst = load_instance(verify_instance);
      const Polygonization poly = load_solution(verify_solution);
      SimplicityReport rep;
      try {
        rep = is_simple(poly, inst);
      } catch (const InvalidPermutation& e) {
        out << "infeasible: " << e.what() << '\n';
        return kInfeasible;
      } catch (const InstanceMismatch& e) {
        out << "infeasible: " << e.what() << '\n';
        return kInfeasible;
      }
      if (!rep) {
        const auto& [e1, e2] = *rep.witness;
        out << "infeasible: edge " << e1.from << "-" << e1.to << " conflicts with edge " << e2.from << "-" << e2.to
            << '\n';
        return kInfeasible;
      }
      out << "feasible area2=" << to_string(polygon_area2_unchecked(poly, inst))
          << " hull_area2=" << to_string(hull_area2(inst)) << '\n';
      return kOk;
    }

    if (*score_cmd) {
      namespace fs = std::filesystem;
      std::map<std::string, fs::path> instances;
      for (const auto& entry : fs::directory_iterator(score_instances)) {
        if (!entry.is_regular_file()) continue;
        const auto id = id_from_path(entry.path());
        if (!instances.emplace(id, entry.path()).second) {
          throw InvalidArgument("two instance files share id '" + id + "'");
        }
      }
      std::vector<fs::path> solutions;
      for (const auto& entry : fs::directory_iterator(score_solutions)) {
        if (entry.is_regular_file() && entry.path().extension() == ".sol") solutions.push_back(entry.path());
      }
      std::sort(solutions.begin(), solutions.end());

      std::vector<ScoreReport> reports;
      std::ostringstream csv;
      csv << csv_header() << '\n';
      for (const auto& path : solutions) {
        const auto start = std::chrono::steady_clock::now();
        const std::string name = path.filename().string();
        const auto dot1 = name.find('.');
        const auto dot2 = name.find('.', dot1 + 1);
        const std::string id = name.substr(0, dot1);
        const std::string obj = dot1 == std::string::npos ? "" : name.substr(dot1 + 1, dot2 - dot1 - 1);
        if (obj != "min" && obj != "max") {
          throw InvalidArgument("solution file '" + name + "' is not named <id>.<min|max>.sol");
        }
        const auto it = instances.find(id);
        if (it == instances.end()) throw IoError("no instance file for solution '" + name + "'");
        const Instance inst = load_instance(it->second);
        const Polygonization poly = load_solution(path);
        reports.push_back(score(poly, inst, obj == "min" ? Objective::Min : Objective::Max));
        csv << csv_row(reports.back(), detail::millis_since(start)) << '\n';
      }
      const ScoreTotals totals = aggregate(reports);
      csv << "total,min," << totals.min_count << ',' << to_decimal(totals.min) << ",,,\n";
      csv << "total,max," << totals.max_count << ',' << to_decimal(totals.max) << ",,,\n";
      detail::emit(score_out, csv.str(), out);
      return kOk;
    }

    if (*bounds_cmd) {
      const Instance inst = load_instance(bounds_instance);
      validate_points(inst);
      const HullGap gap = hull_gap(inst);
      const AreaBounds2 b = area_bounds2(inst);
      out << "n=" << inst.size() << " h_b=" << to_string(gap.h_b) << " h_i=" << to_string(gap.h_i)
          << " lower2=" << to_string(b.lower2) << " upper2=" << to_string(b.upper2)
          << " hull_area2=" << to_string(hull_area2(inst)) << '\n';
      return kOk;
    }

    if (*count_cmd) {
      const Instance inst = load_instance(count_instance);
      out << count_polygonizations(inst, count_cap, resolve_threads(count_threads)) << '\n';
      return kOk;
    }

    if (*svg_cmd) {
      const Instance inst = load_instance(svg_instance);
      std::optional<Polygonization> poly;
      if (!svg_solution.empty()) poly = load_solution(svg_solution);
      detail::emit(svg_out, render_svg(inst, poly ? &*poly : nullptr), out);
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InstanceMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InstanceTooLarge& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  }
  return kUsage;
}

}  // namespace polyarea::cli
