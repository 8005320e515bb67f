#pragma once
// File formats, instance generators and SVG rendering.
//
// Instance file:            Solution file:
//   # optional comments       instance <id>
//   n <count>                 <i0> <i1> ... <i(n-1)>
//   <index> <x> <y>
//   ...
// Canonical form: LF endings, single spaces, no comments, rows sorted by index.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "polyarea/error.hpp"
#include "polyarea/geom.hpp"
#include "polyarea/polygon.hpp"
#include "polyarea/rng.hpp"

namespace polyarea {

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
  T value{};
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size()) {
    throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(token) + "'");
  }
  return value;
}

// Non-empty, non-comment lines with their 1-based line numbers.
struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

inline std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    out.push_back({number, std::move(tokens)});
  }
  return out;
}

struct PointHash {
  std::size_t operator()(const Point& p) const {
    return std::hash<std::uint64_t>{}(static_cast<std::uint64_t>(p.x) * 0x9E3779B97F4A7C15ULL ^
                                      static_cast<std::uint64_t>(p.y));
  }
};

}  // namespace detail

inline Instance parse_instance(std::string_view text, std::string id = {}) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError(1, "missing header 'n <count>'");
  const auto& header = lines.front();
  if (header.tokens.size() != 2 || header.tokens[0] != "n") {
    throw ParseError(header.number, "expected header 'n <count>'");
  }
  const auto n = detail::parse_number<std::size_t>(header.tokens[1], header.number, "point count");
  if (lines.size() - 1 != n) {
    const std::size_t at = lines.size() > n + 1 ? lines[n + 1].number : lines.back().number;
    throw ParseError(at, "header declares " + std::to_string(n) + " points, file has " +
                             std::to_string(lines.size() - 1));
  }

  Instance inst{std::move(id), std::vector<Point>(n)};
  std::vector<bool> seen(n, false);
  std::unordered_set<Point, detail::PointHash> coords;
  coords.reserve(n);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& line = lines[k];
    if (line.tokens.size() != 3) throw ParseError(line.number, "expected '<index> <x> <y>'");
    const auto index = detail::parse_number<std::size_t>(line.tokens[0], line.number, "point index");
    const Point p{detail::parse_number<coord_t>(line.tokens[1], line.number, "x coordinate"),
                  detail::parse_number<coord_t>(line.tokens[2], line.number, "y coordinate")};
    if (index >= n) throw ParseError(line.number, "point index " + std::to_string(index) + " out of range");
    if (seen[index]) throw ParseError(line.number, "point index " + std::to_string(index) + " repeated");
    if (!within_cap(p)) throw ParseError(line.number, "coordinate exceeds the 2^40 cap");
    if (!coords.insert(p).second) {
      throw DuplicatePoint(line.number, "duplicate point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    }
    seen[index] = true;
    inst.points[index] = p;
  }
  return inst;
}

inline std::string serialize_instance(const Instance& inst) {
  std::string out = "n " + std::to_string(inst.size()) + "\n";
  for (std::size_t i = 0; i < inst.size(); ++i) {
    out += std::to_string(i);
    out += ' ';
    out += std::to_string(inst[i].x);
    out += ' ';
    out += std::to_string(inst[i].y);
    out += '\n';
  }
  return out;
}

inline Polygonization parse_solution(std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError(1, "missing header 'instance <id>'");
  const auto& header = lines.front();
  if (header.tokens.size() != 2 || header.tokens[0] != "instance") {
    throw ParseError(header.number, "expected header 'instance <id>'");
  }
  if (lines.size() != 2) {
    throw ParseError(lines.size() > 2 ? lines[2].number : header.number,
                     "expected exactly one line of vertex indices");
  }
  Polygonization poly{std::string(header.tokens[1]), {}};
  const auto& body = lines[1];
  poly.order.reserve(body.tokens.size());
  std::unordered_set<std::size_t> seen;
  seen.reserve(body.tokens.size());
  for (auto token : body.tokens) {
    const auto v = detail::parse_number<std::size_t>(token, body.number, "vertex index");
    if (!seen.insert(v).second) throw ParseError(body.number, "vertex index " + std::to_string(v) + " repeated");
    poly.order.push_back(v);
  }
  return poly;
}

inline std::string serialize_solution(const Polygonization& poly) {
  std::string out = "instance " + poly.instance_id + "\n";
  for (std::size_t k = 0; k < poly.order.size(); ++k) {
    if (k > 0) out += ' ';
    out += std::to_string(poly.order[k]);
  }
  out += '\n';
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return data;
}

inline void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

/// The instance id is the file name up to its first dot.
inline std::string id_from_path(const std::filesystem::path& path) {
  const std::string name = path.filename().string();
  return name.substr(0, name.find('.'));
}

inline Instance load_instance(const std::filesystem::path& path) {
  return parse_instance(read_file(path), id_from_path(path));
}

inline Polygonization load_solution(const std::filesystem::path& path) { return parse_solution(read_file(path)); }

// ---------------------------------------------------------------- rasters

struct GrayscaleRaster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t maxval = 255;
  std::vector<std::uint32_t> pixels;  // row-major, row 0 at the top

  std::uint32_t at(std::size_t col, std::size_t row) const { return pixels[row * width + col]; }

  void validate() const {
    if (width == 0 || height == 0) throw InvalidArgument("raster dimensions must be positive");
    if (maxval < 1 || maxval > 65535) throw InvalidArgument("raster maxval must lie in [1, 65535]");
    if (pixels.size() != width * height) throw InvalidArgument("raster pixel count does not match its dimensions");
    for (auto v : pixels) {
      if (v > maxval) throw InvalidArgument("raster pixel exceeds maxval");
    }
  }
};

/// Plain (P2) or binary (P5) PGM.
inline GrayscaleRaster parse_pgm(std::string_view data) {
  std::size_t pos = 0;
  std::size_t line = 1;
  auto skip_space = [&] {
    while (pos < data.size()) {
      const char c = data[pos];
      if (c == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        if (c == '\n') ++line;
        ++pos;
      } else {
        break;
      }
    }
  };
  auto token = [&]() -> std::string_view {
    skip_space();
    const std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    if (start == pos) throw ParseError(line, "unexpected end of PGM data");
    return data.substr(start, pos - start);
  };

  const auto magic = token();
  if (magic != "P2" && magic != "P5") throw ParseError(line, "not a PGM file (expected P2 or P5)");
  GrayscaleRaster r;
  r.width = detail::parse_number<std::size_t>(token(), line, "width");
  r.height = detail::parse_number<std::size_t>(token(), line, "height");
  r.maxval = detail::parse_number<std::uint32_t>(token(), line, "maxval");
  if (r.width == 0 || r.height == 0) throw ParseError(line, "PGM dimensions must be positive");
  if (r.maxval < 1 || r.maxval > 65535) throw ParseError(line, "PGM maxval must lie in [1, 65535]");
  const std::size_t count = r.width * r.height;
  r.pixels.resize(count);

  if (magic == "P2") {
    for (auto& v : r.pixels) {
      v = detail::parse_number<std::uint32_t>(token(), line, "pixel value");
      if (v > r.maxval) throw ParseError(line, "pixel value exceeds maxval");
    }
    return r;
  }
  ++pos;  // single whitespace byte after maxval
  const std::size_t bytes = r.maxval < 256 ? 1 : 2;
  if (data.size() < pos + count * bytes) throw ParseError(line, "truncated P5 pixel data");
  for (std::size_t i = 0; i < count; ++i) {
    const auto* p = reinterpret_cast<const unsigned char*>(data.data() + pos + i * bytes);
    r.pixels[i] = bytes == 1 ? p[0] : (std::uint32_t{p[0]} << 8 | p[1]);
    if (r.pixels[i] > r.maxval) throw ParseError(line, "pixel value exceeds maxval");
  }
  return r;
}

// -------------------------------------------------------------- generators

struct GenOptions {
  /// Double every coordinate so all hull and polygon areas are integers.
  bool even = false;
};

namespace detail {

inline bool all_collinear(std::span<const Point> pts) {
  for (std::size_t i = 2; i < pts.size(); ++i) {
    if (cross(pts[0], pts[1], pts[i]) != 0) return false;
  }
  return true;
}

inline void apply_even(Instance& inst, const GenOptions& opt) {
  if (!opt.even) return;
  for (auto& p : inst.points) {
    p.x *= 2;
    p.y *= 2;
  }
}

inline constexpr int kCollinearRerolls = 64;

}  // namespace detail

/// n distinct points uniform on [0, extent]^2. All-collinear draws are redrawn.
inline Instance gen_uniform(std::size_t n, coord_t extent, std::uint64_t seed, GenOptions opt = {}) {
  if (n < 3) throw InvalidArgument("uniform generator needs n >= 3");
  if (extent < 0 || static_cast<std::uint64_t>(extent) < n) {
    throw CapacityError("extent " + std::to_string(extent) + " is too small for " + std::to_string(n) + " points");
  }
  if (extent > kCoordCap / 2) throw CapacityError("extent exceeds the coordinate cap");
  SplitMix64 rng(seed);
  const std::uint64_t max_draws = 64 * static_cast<std::uint64_t>(n) + 1024;
  for (int attempt = 0; attempt < detail::kCollinearRerolls; ++attempt) {
    Instance inst{"uniform-" + std::to_string(n) + "-" + std::to_string(seed), {}};
    inst.points.reserve(n);
    std::unordered_set<Point, detail::PointHash> used;
    used.reserve(n);
    std::uint64_t draws = 0;
    while (inst.points.size() < n) {
      if (++draws > max_draws) throw CapacityError("could not draw " + std::to_string(n) + " distinct points");
      const Point p{rng.between(0, extent), rng.between(0, extent)};
      if (used.insert(p).second) inst.points.push_back(p);
    }
    if (detail::all_collinear(inst.points)) continue;
    detail::apply_even(inst, opt);
    return inst;
  }
  throw CapacityError("every uniform draw was collinear");
}

enum class RasterWeight { Illumination, Edge };

namespace detail {

inline std::uint64_t isqrt(std::uint64_t v) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

/// Per-pixel weight: intensity, or gradient magnitude from central
/// differences (one-sided at the border), scaled by 16 before rounding down.
inline std::vector<std::uint64_t> raster_weights(const GrayscaleRaster& r, RasterWeight kind) {
  std::vector<std::uint64_t> w(r.pixels.size());
  if (kind == RasterWeight::Illumination) {
    std::copy(r.pixels.begin(), r.pixels.end(), w.begin());
    return w;
  }
  for (std::size_t row = 0; row < r.height; ++row) {
    for (std::size_t col = 0; col < r.width; ++col) {
      const std::size_t c0 = col > 0 ? col - 1 : col;
      const std::size_t c1 = col + 1 < r.width ? col + 1 : col;
      const std::size_t r0 = row > 0 ? row - 1 : row;
      const std::size_t r1 = row + 1 < r.height ? row + 1 : row;
      // Differences over the stencil width, in half-units when it spans two.
      const std::int64_t gx = (std::int64_t{r.at(c1, row)} - r.at(c0, row)) * (c1 - c0 == 2 ? 1 : 2);
      const std::int64_t gy = (std::int64_t{r.at(col, r1)} - r.at(col, r0)) * (r1 - r0 == 2 ? 1 : 2);
      w[row * r.width + col] = isqrt(static_cast<std::uint64_t>(64 * (gx * gx + gy * gy)));
    }
  }
  return w;
}

}  // namespace detail

/// n distinct pixel centers drawn with probability proportional to the
/// chosen weight. Pixel (col, row) becomes point (col, height - 1 - row).
inline Instance gen_raster(const GrayscaleRaster& raster, RasterWeight kind, std::size_t n, std::uint64_t seed,
                           GenOptions opt = {}) {
  raster.validate();
  if (n == 0) throw InvalidArgument("raster generator needs n >= 1");
  const auto weights = detail::raster_weights(raster, kind);
  std::vector<std::uint64_t> cumulative(weights.size());
  std::uint64_t total = 0;
  std::size_t support = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total += weights[i];
    cumulative[i] = total;
    if (weights[i] > 0) ++support;
  }
  if (total == 0) throw InvalidArgument("raster has zero total weight");
  if (support < n) {
    throw CapacityError("raster has " + std::to_string(support) + " weighted pixels, " + std::to_string(n) +
                        " requested");
  }

  SplitMix64 rng(seed);
  const char* name = kind == RasterWeight::Illumination ? "illumination-" : "edge-";
  Instance inst{name + std::to_string(n) + "-" + std::to_string(seed), {}};
  inst.points.reserve(n);
  std::vector<bool> taken(weights.size(), false);
  const std::uint64_t max_draws = 256 * static_cast<std::uint64_t>(n) + 4096;
  for (std::uint64_t draws = 0; inst.points.size() < n; ++draws) {
    if (draws >= max_draws) throw CapacityError("could not draw " + std::to_string(n) + " distinct pixels");
    const std::uint64_t ticket = rng.below(total);
    const std::size_t pixel =
        static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), ticket) - cumulative.begin());
    if (taken[pixel]) continue;
    taken[pixel] = true;
    const auto col = static_cast<coord_t>(pixel % raster.width);
    const auto row = static_cast<coord_t>(pixel / raster.width);
    inst.points.push_back({col, static_cast<coord_t>(raster.height) - 1 - row});
  }
  detail::apply_even(inst, opt);
  return inst;
}

inline Instance gen_illumination(const GrayscaleRaster& raster, std::size_t n, std::uint64_t seed,
                                 GenOptions opt = {}) {
  return gen_raster(raster, RasterWeight::Illumination, n, seed, opt);
}

inline Instance gen_edge(const GrayscaleRaster& raster, std::size_t n, std::uint64_t seed, GenOptions opt = {}) {
  return gen_raster(raster, RasterWeight::Edge, n, seed, opt);
}

/// n distinct points on `gridlines` vertical lines x = k * spacing, with y
/// uniform in [0, extent]. extent = 0 selects n.
inline Instance gen_ortho(std::size_t n, std::size_t gridlines, std::uint64_t seed, coord_t extent = 0,
                          GenOptions opt = {}) {
  if (n < 3) throw InvalidArgument("ortho generator needs n >= 3");
  if (gridlines < 2) throw InvalidArgument("ortho generator needs at least 2 gridlines");
  if (extent == 0) extent = static_cast<coord_t>(n);
  if (extent < 1 || extent > kCoordCap / 2) throw InvalidArgument("ortho extent out of range");
  const auto rows = static_cast<std::uint64_t>(extent) + 1;
  if (rows * gridlines < n) {
    throw CapacityError(std::to_string(gridlines) + " gridlines of height " + std::to_string(extent) +
                        " cannot hold " + std::to_string(n) + " points");
  }
  const coord_t spacing = std::max<coord_t>(1, extent / static_cast<coord_t>(gridlines - 1));
  if (spacing * static_cast<coord_t>(gridlines - 1) > kCoordCap / 2) throw CapacityError("ortho grid exceeds the coordinate cap");

  SplitMix64 rng(seed);
  const std::uint64_t max_draws = 64 * static_cast<std::uint64_t>(n) + 1024;
  for (int attempt = 0; attempt < detail::kCollinearRerolls; ++attempt) {
    Instance inst{"ortho-" + std::to_string(n) + "-" + std::to_string(seed), {}};
    inst.points.reserve(n);
    std::unordered_set<Point, detail::PointHash> used;
    used.reserve(n);
    std::uint64_t draws = 0;
    while (inst.points.size() < n) {
      if (++draws > max_draws) throw CapacityError("could not draw " + std::to_string(n) + " distinct points");
      const auto line = static_cast<coord_t>(rng.below(gridlines));
      const Point p{line * spacing, rng.between(0, extent)};
      if (used.insert(p).second) inst.points.push_back(p);
    }
    if (detail::all_collinear(inst.points)) continue;
    detail::apply_even(inst, opt);
    return inst;
  }
  throw CapacityError("every ortho draw was collinear");
}

// --------------------------------------------------------------------- SVG

/// Points as dots, the hull dashed, and the polygon (if given) as one
/// closed path. Refuses polygons that are not simple.
inline std::string render_svg(const Instance& inst, const Polygonization* poly = nullptr) {
  if (inst.size() == 0) throw InvalidArgument("cannot render an empty instance");
  if (poly && !is_simple(*poly, inst)) throw NotSimple("refusing to render a non-simple polygon");
  coord_t x0 = inst[0].x, x1 = inst[0].x, y0 = inst[0].y, y1 = inst[0].y;
  for (const auto& p : inst.points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double span = static_cast<double>(std::max<coord_t>({x1 - x0, y1 - y0, 1}));
  const double margin = span * 0.05;
  const double dot = span * 0.006 + 0.05;
  const double stroke = span * 0.002 + 0.02;
  // SVG's y axis points down; flip about the bounding box.
  auto px = [&](const Point& p) { return static_cast<double>(p.x - x0); };
  auto py = [&](const Point& p) { return static_cast<double>(y1 - p.y); };

  std::ostringstream out;
  out.precision(12);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << -margin << ' ' << -margin << ' '
      << static_cast<double>(x1 - x0) + 2 * margin << ' ' << static_cast<double>(y1 - y0) + 2 * margin << "\">\n";
  try {
    const auto hull = convex_hull(inst.points);
    out << "<polygon class=\"hull\" fill=\"none\" stroke=\"#888\" stroke-width=\"" << stroke
        << "\" stroke-dasharray=\"" << 4 * stroke << ' ' << 3 * stroke << "\" points=\"";
    for (std::size_t k = 0; k < hull.size(); ++k) out << (k ? " " : "") << px(inst[hull[k]]) << ',' << py(inst[hull[k]]);
    out << "\"/>\n";
  } catch (const Error&) {
    // Fewer than three points or all collinear: no hull to draw.
  }
  if (poly) {
    out << "<path class=\"polygon\" fill=\"#cde\" fill-opacity=\"0.6\" stroke=\"#246\" stroke-width=\"" << stroke
        << "\" d=\"";
    for (std::size_t k = 0; k < poly->order.size(); ++k) {
      const Point& p = inst[poly->order[k]];
      out << (k ? " L " : "M ") << px(p) << ' ' << py(p);
    }
    out << " Z\"/>\n";
  }
  for (const auto& p : inst.points) {
    out << "<circle cx=\"" << px(p) << "\" cy=\"" << py(p) << "\" r=\"" << dot << "\" fill=\"#c22\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

inline void export_svg(const Instance& inst, const Polygonization* poly, const std::filesystem::path& path) {
  write_file(path, render_svg(inst, poly));
}

}  // namespace polyarea
