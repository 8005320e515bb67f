#pragma once
// Uniform bucketing grids. They only narrow down which exact predicate
// calls are made; nothing is ever pruned on geometric grounds here.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "polyarea/geom.hpp"

namespace polyarea {

namespace detail {

inline wide_t floor_div(wide_t num, wide_t den) {
  wide_t q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

}  // namespace detail

class GridFrame {
 public:
  GridFrame() = default;

  /// Square cells sized so the bounding box holds about `target_cells`.
  GridFrame(std::span<const Point> pts, std::size_t target_cells) {
    minx_ = maxx_ = pts.empty() ? 0 : pts[0].x;
    miny_ = maxy_ = pts.empty() ? 0 : pts[0].y;
    for (const auto& p : pts) {
      minx_ = std::min(minx_, p.x);
      maxx_ = std::max(maxx_, p.x);
      miny_ = std::min(miny_, p.y);
      maxy_ = std::max(maxy_, p.y);
    }
    const double w = static_cast<double>(maxx_ - minx_) + 1.0;
    const double h = static_cast<double>(maxy_ - miny_) + 1.0;
    const double side = std::sqrt(w * h / static_cast<double>(std::max<std::size_t>(target_cells, 1)));
    cell_ = std::max<coord_t>(1, static_cast<coord_t>(std::ceil(side)));
    cols_ = static_cast<std::size_t>((maxx_ - minx_) / cell_) + 1;
    rows_ = static_cast<std::size_t>((maxy_ - miny_) / cell_) + 1;
  }

  std::size_t cols() const { return cols_; }
  std::size_t rows() const { return rows_; }
  std::size_t cell_count() const { return cols_ * rows_; }
  coord_t cell_size() const { return cell_; }

  std::size_t col_of(coord_t x) const { return clamp_col(static_cast<std::int64_t>((x - minx_) / cell_)); }
  std::size_t row_of(coord_t y) const { return clamp_row(static_cast<std::int64_t>((y - miny_) / cell_)); }
  std::size_t index(std::size_t col, std::size_t row) const { return row * cols_ + col; }
  std::size_t cell_of(const Point& p) const { return index(col_of(p.x), row_of(p.y)); }

  /// Calls fn(col, row_lo, row_hi) for every column the closed segment
  /// touches; the row range covers the segment's extent in that column.
  template <typename Fn>
  void segment_columns(const Point& p, const Point& q, Fn&& fn) const {
    Point a = p;
    Point b = q;
    if (b.x < a.x) std::swap(a, b);
    const std::size_t c0 = col_of(a.x);
    const std::size_t c1 = col_of(b.x);
    if (a.x == b.x || c0 == c1) {
      fn(c0, row_of(std::min(a.y, b.y)), row_of(std::max(a.y, b.y)));
      return;
    }
    const wide_t dx = wide_t{b.x} - a.x;
    const wide_t dy = wide_t{b.y} - a.y;
    auto row_at = [&](wide_t x) {
      const wide_t num = (wide_t{a.y} - miny_) * dx + dy * (x - a.x);
      return clamp_row(static_cast<std::int64_t>(detail::floor_div(num, dx * cell_)));
    };
    for (std::size_t c = c0; c <= c1; ++c) {
      const wide_t left = std::max<wide_t>(a.x, wide_t{minx_} + wide_t{cell_} * static_cast<wide_t>(c));
      const wide_t right = std::min<wide_t>(b.x, wide_t{minx_} + wide_t{cell_} * static_cast<wide_t>(c + 1));
      const std::size_t r0 = row_at(left);
      const std::size_t r1 = row_at(right);
      fn(c, std::min(r0, r1), std::max(r0, r1));
    }
  }

  template <typename Fn>
  void segment_cells(const Point& p, const Point& q, Fn&& fn) const {
    segment_columns(p, q, [&](std::size_t c, std::size_t r0, std::size_t r1) {
      for (std::size_t r = r0; r <= r1; ++r) fn(index(c, r));
    });
  }

  /// Every cell touched by the closed triangle abc.
  template <typename Fn>
  void triangle_cells(const Point& a, const Point& b, const Point& c, Fn&& fn) const {
    const std::size_t c0 = col_of(std::min({a.x, b.x, c.x}));
    const std::size_t c1 = col_of(std::max({a.x, b.x, c.x}));
    std::vector<std::size_t> lo(c1 - c0 + 1, rows_);
    std::vector<std::size_t> hi(c1 - c0 + 1, 0);
    auto absorb = [&](std::size_t col, std::size_t r0, std::size_t r1) {
      lo[col - c0] = std::min(lo[col - c0], r0);
      hi[col - c0] = std::max(hi[col - c0], r1);
    };
    segment_columns(a, b, absorb);
    segment_columns(b, c, absorb);
    segment_columns(c, a, absorb);
    for (std::size_t col = c0; col <= c1; ++col) {
      for (std::size_t r = lo[col - c0]; r <= hi[col - c0] && r < rows_; ++r) fn(index(col, r));
    }
  }

 private:
  std::size_t clamp_col(std::int64_t c) const {
    return static_cast<std::size_t>(std::clamp<std::int64_t>(c, 0, static_cast<std::int64_t>(cols_) - 1));
  }
  std::size_t clamp_row(std::int64_t r) const {
    return static_cast<std::size_t>(std::clamp<std::int64_t>(r, 0, static_cast<std::int64_t>(rows_) - 1));
  }

  coord_t minx_ = 0, maxx_ = 0, miny_ = 0, maxy_ = 0;
  coord_t cell_ = 1;
  std::size_t cols_ = 1, rows_ = 1;
};

/// Visits each cell at most once per pass.
class CellMarks {
 public:
  explicit CellMarks(std::size_t cells = 0) : stamp_(cells, 0) {}
  void next_pass() {
    if (++current_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      current_ = 1;
    }
  }
  bool mark(std::size_t cell) {
    if (stamp_[cell] == current_) return false;
    stamp_[cell] = current_;
    return true;
  }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t current_ = 0;
};

/// Static point buckets (CSR layout).
class PointGrid {
 public:
  PointGrid() = default;
  PointGrid(std::span<const Point> pts, const GridFrame& frame) : frame_(frame) {
    start_.assign(frame_.cell_count() + 1, 0);
    for (const auto& p : pts) ++start_[frame_.cell_of(p) + 1];
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    items_.resize(pts.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) items_[fill[frame_.cell_of(pts[i])]++] = i;
  }

  const GridFrame& frame() const { return frame_; }

  std::span<const std::size_t> cell(std::size_t c) const {
    return {items_.data() + start_[c], start_[c + 1] - start_[c]};
  }

 private:
  GridFrame frame_;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> items_;
};

/// Undirected polygon edge keyed by its endpoint indices.
struct EdgeKey {
  std::uint32_t u = 0;
  std::uint32_t v = 0;

  static EdgeKey of(std::size_t a, std::size_t b) {
    return a < b ? EdgeKey{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)}
                 : EdgeKey{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(a)};
  }
  bool touches(std::size_t w) const { return u == w || v == w; }
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};

/// Dynamic edge buckets: every edge is registered in each cell its segment
/// passes through, so long edges are found from any cell they cross.
class EdgeGrid {
 public:
  EdgeGrid() = default;
  EdgeGrid(std::span<const Point> pts, const GridFrame& frame)
      : pts_(pts), frame_(frame), cells_(frame.cell_count()) {}

  const GridFrame& frame() const { return frame_; }

  void add(std::size_t a, std::size_t b) {
    const EdgeKey key = EdgeKey::of(a, b);
    frame_.segment_cells(pts_[a], pts_[b], [&](std::size_t c) { cells_[c].push_back(key); });
  }

  void remove(std::size_t a, std::size_t b) {
    const EdgeKey key = EdgeKey::of(a, b);
    frame_.segment_cells(pts_[a], pts_[b], [&](std::size_t c) {
      auto& bucket = cells_[c];
      auto it = std::find(bucket.begin(), bucket.end(), key);
      if (it != bucket.end()) {
        *it = bucket.back();
        bucket.pop_back();
      }
    });
  }

  /// fn(EdgeKey) for edges sharing a cell with segment pq; stops early when
  /// fn returns false. An edge may be reported more than once.
  template <typename Fn>
  bool for_each_near_segment(const Point& p, const Point& q, Fn&& fn) const {
    bool keep_going = true;
    frame_.segment_cells(p, q, [&](std::size_t c) {
      if (!keep_going) return;
      for (const EdgeKey& e : cells_[c]) {
        if (!fn(e)) {
          keep_going = false;
          return;
        }
      }
    });
    return keep_going;
  }

  /// Distinct edges in cells within Chebyshev distance `radius` of p's cell,
  /// in (u, v) order.
  template <typename Fn>
  void for_each_near_point(const Point& p, std::size_t radius, Fn&& fn) {
    const std::size_t pc = frame_.col_of(p.x);
    const std::size_t pr = frame_.row_of(p.y);
    const std::size_t c0 = pc > radius ? pc - radius : 0;
    const std::size_t r0 = pr > radius ? pr - radius : 0;
    const std::size_t c1 = std::min(frame_.cols() - 1, pc + radius);
    const std::size_t r1 = std::min(frame_.rows() - 1, pr + radius);
    seen_.clear();
    for (std::size_t r = r0; r <= r1; ++r) {
      for (std::size_t c = c0; c <= c1; ++c) {
        const auto& bucket = cells_[frame_.index(c, r)];
        seen_.insert(seen_.end(), bucket.begin(), bucket.end());
      }
    }
    std::sort(seen_.begin(), seen_.end(), [](const EdgeKey& a, const EdgeKey& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    seen_.erase(std::unique(seen_.begin(), seen_.end()), seen_.end());
    for (const EdgeKey& e : seen_) fn(e);
  }

 private:
  std::span<const Point> pts_;
  GridFrame frame_;
  std::vector<std::vector<EdgeKey>> cells_;
  std::vector<EdgeKey> seen_;
};

}  // namespace polyarea
