#include "pslab/test_function.hpp"

#include <cmath>

#include "pslab/common.hpp"

namespace pslab {

TestFunction::TestFunction(std::vector<TrapezoidProfile> axes, double amplitude)
    : axes_(std::move(axes)), amplitude_(amplitude) {
    if (axes_.empty()) throw precondition_error("test function needs at least one axis");
    if (!(amplitude_ >= 0) || !std::isfinite(amplitude_))
        throw precondition_error("amplitude must be finite and nonnegative");
    for (const TrapezoidProfile& p : axes_) {
        if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c) || !std::isfinite(p.e))
            throw precondition_error("profile breaks must be finite");
        if (!(p.a <= p.b && p.b <= p.c && p.c <= p.e))
            throw precondition_error("profile breaks must satisfy a <= b <= c <= e");
        // zero-width rise or fall would make f discontinuous
        if (!(p.b > p.a) || !(p.e > p.c))
            throw precondition_error("profile rise and fall must have positive width");
    }
}

BoxRegion TestFunction::support() const {
    std::vector<double> lo, hi;
    lo.reserve(axes_.size());
    hi.reserve(axes_.size());
    for (const TrapezoidProfile& p : axes_) {
        lo.push_back(p.a);
        hi.push_back(p.e);
    }
    return BoxRegion(std::move(lo), std::move(hi));
}

double TestFunction::profile_value(int axis, double x) const {
    const TrapezoidProfile& p = axes_[static_cast<std::size_t>(axis)];
    if (x <= p.a || x >= p.e) return 0.0;
    if (x < p.b) return (x - p.a) / (p.b - p.a);
    if (x <= p.c) return 1.0;
    return (p.e - x) / (p.e - p.c);
}

double TestFunction::operator()(std::span<const double> x) const {
    double v = amplitude_;
    for (int i = 0; i < dim(); ++i) {
        if (v == 0.0) return 0.0;
        v *= profile_value(i, x[static_cast<std::size_t>(i)]);
    }
    return v;
}

TestFunction TestFunction::scaled(double factor) const {
    return TestFunction(axes_, amplitude_ * factor);
}

}  // namespace pslab
