#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace pslab {

using Coord = std::int64_t;
using Point = std::vector<Coord>;  // one coordinate per dimension

// Hard cap on sites per window (x and y buffers are one byte per site).
inline constexpr std::int64_t kMaxWindowSites = std::int64_t{1} << 26;

// Finite axis-aligned box of Z^d, both corners inclusive. Row-major layout,
// last axis fastest.
class LatticeWindow {
  public:
    LatticeWindow(Point lo, Point hi);

    int dim() const { return static_cast<int>(lo_.size()); }
    const Point& lo() const { return lo_; }
    const Point& hi() const { return hi_; }
    std::int64_t extent(int axis) const { return hi_[axis] - lo_[axis] + 1; }
    std::int64_t size() const { return size_; }
    std::int64_t stride(int axis) const { return strides_[axis]; }

    bool contains(const Point& p) const;
    bool contains(const LatticeWindow& other) const;
    std::int64_t flat_index(const Point& p) const;

  private:
    Point lo_, hi_;
    std::vector<std::int64_t> strides_;
    std::int64_t size_ = 0;
};

// Axis-aligned box of R^d with lo < hi coordinatewise.
class BoxRegion {
  public:
    BoxRegion(std::vector<double> lo, std::vector<double> hi);

    int dim() const { return static_cast<int>(lo_.size()); }
    const std::vector<double>& lo() const { return lo_; }
    const std::vector<double>& hi() const { return hi_; }
    double volume() const;

  private:
    std::vector<double> lo_, hi_;
};

// Integer points of the scaled closed box n*B. Bounds within kLatticeSnapTol
// of an integer are snapped to it so boundary points survive floating-point
// scaling. nullopt when the box holds no lattice points.
inline constexpr double kLatticeSnapTol = 1e-9;
std::optional<LatticeWindow> lattice_box(const BoxRegion& box, std::int64_t n);

// All points of a window in row-major order.
std::vector<Point> window_points(const LatticeWindow& w);

// Visits every row (contiguous run along the last axis) of `inner`, which must
// be contained in `outer`. fn(inner_flat, outer_flat, len): flat indices of the
// row start in each layout and the run length. Row order is row-major.
template <class Fn>
void for_each_row(const LatticeWindow& inner, const LatticeWindow& outer, Fn&& fn) {
    const int d = inner.dim();
    const std::int64_t len = inner.extent(d - 1);
    Point p = inner.lo();
    for (;;) {
        fn(inner.flat_index(p), outer.flat_index(p), len);
        int axis = d - 2;
        while (axis >= 0) {
            if (++p[axis] <= inner.hi()[axis]) break;
            p[axis] = inner.lo()[axis];
            --axis;
        }
        if (axis < 0) return;
    }
}

// Single-window variant: fn(flat, len).
template <class Fn>
void for_each_row(const LatticeWindow& w, Fn&& fn) {
    for_each_row(w, w, [&](std::int64_t flat, std::int64_t, std::int64_t len) { fn(flat, len); });
}

}  // namespace pslab
