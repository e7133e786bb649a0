#include "pslab/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "pslab/common.hpp"

namespace pslab {

LatticeWindow::LatticeWindow(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.empty() || lo_.size() != hi_.size())
        throw precondition_error("lattice window corners must share a positive dimension");
    const int d = dim();
    for (int i = 0; i < d; ++i)
        if (lo_[i] > hi_[i]) throw precondition_error("lattice window needs lo <= hi per axis");
    strides_.assign(d, 1);
    size_ = 1;
    for (int i = d - 1; i >= 0; --i) {
        strides_[i] = size_;
        const std::int64_t ext = hi_[i] - lo_[i] + 1;
        if (ext > 0 && size_ > kMaxWindowSites / ext)
            throw resource_error("lattice window exceeds the site budget");
        size_ *= ext;
    }
}

bool LatticeWindow::contains(const Point& p) const {
    if (static_cast<int>(p.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
    return true;
}

bool LatticeWindow::contains(const LatticeWindow& other) const {
    if (other.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (other.lo_[i] < lo_[i] || other.hi_[i] > hi_[i]) return false;
    return true;
}

std::int64_t LatticeWindow::flat_index(const Point& p) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim(); ++i) idx += (p[i] - lo_[i]) * strides_[i];
    return idx;
}

BoxRegion::BoxRegion(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.empty() || lo_.size() != hi_.size())
        throw precondition_error("box corners must share a positive dimension");
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i]) || !(lo_[i] < hi_[i]))
            throw precondition_error("box needs finite lo < hi per axis");
    }
}

double BoxRegion::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo_.size(); ++i) v *= hi_[i] - lo_[i];
    return v;
}

std::optional<LatticeWindow> lattice_box(const BoxRegion& box, std::int64_t n) {
    const int d = box.dim();
    Point lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        const double a = static_cast<double>(n) * box.lo()[i];
        const double b = static_cast<double>(n) * box.hi()[i];
        lo[i] = static_cast<Coord>(std::ceil(a - kLatticeSnapTol));
        hi[i] = static_cast<Coord>(std::floor(b + kLatticeSnapTol));
        if (lo[i] > hi[i]) return std::nullopt;
    }
    return LatticeWindow(std::move(lo), std::move(hi));
}

std::vector<Point> window_points(const LatticeWindow& w) {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(w.size()));
    Point p = w.lo();
    const int d = w.dim();
    for (;;) {
        pts.push_back(p);
        int axis = d - 1;
        while (axis >= 0) {
            if (++p[axis] <= w.hi()[axis]) break;
            p[axis] = w.lo()[axis];
            --axis;
        }
        if (axis < 0) return pts;
    }
}

}  // namespace pslab
