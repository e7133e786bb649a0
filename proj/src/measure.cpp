#include "pslab/measure.hpp"

#include <cmath>

#include "pslab/common.hpp"

namespace pslab {

std::optional<LatticeWindow> support_window(const TestFunction& f, std::int64_t n) {
    return lattice_box(f.support(), n);
}

std::vector<Point> lattice_support(const TestFunction& f, std::int64_t n) {
    const auto w = support_window(f, n);
    if (!w) return {};
    return window_points(*w);
}

std::vector<double> support_values(const TestFunction& f, std::int64_t n, const LatticeWindow& supp) {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(supp.size()));
    std::vector<double> xs(static_cast<std::size_t>(supp.dim()));
    for (const Point& p : window_points(supp)) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            xs[i] = static_cast<double>(p[i]) / static_cast<double>(n);
        vals.push_back(f(xs));
    }
    return vals;
}

std::int64_t measure_of_box(const FieldSample& sample, const BoxRegion& box) {
    if (box.dim() != sample.spec.dim())
        throw precondition_error("box dimension does not match the sample");
    const auto sites = lattice_box(box, sample.spec.scale());
    if (!sites) return 0;
    if (!sample.window.contains(*sites))
        throw precondition_error("sample window does not cover the scaled box");
    std::int64_t count = 0;
    for_each_row(*sites, sample.window, [&](std::int64_t, std::int64_t wbase, std::int64_t len) {
        for (std::int64_t i = 0; i < len; ++i) count += sample.x[static_cast<std::size_t>(wbase + i)];
    });
    return count;
}

double integral_against(const TestFunction& f, const FieldSample& sample) {
    if (f.dim() != sample.spec.dim())
        throw precondition_error("test function dimension does not match the sample");
    const auto supp = support_window(f, sample.spec.scale());
    if (!supp) return 0.0;
    if (!sample.window.contains(*supp))
        throw precondition_error("sample window does not cover the scaled support");
    const std::vector<double> vals = support_values(f, sample.spec.scale(), *supp);
    double acc = 0.0;
    for_each_row(*supp, sample.window, [&](std::int64_t sbase, std::int64_t wbase, std::int64_t len) {
        for (std::int64_t i = 0; i < len; ++i)
            acc += vals[static_cast<std::size_t>(sbase + i)] *
                   static_cast<double>(sample.x[static_cast<std::size_t>(wbase + i)]);
    });
    return acc;
}

namespace {

struct AxisRule {
    std::vector<double> weights;  // Simpson weights, panel width folded in
    std::vector<double> profile;  // profile values at the nodes
};

// Composite Simpson nodes for one axis: `panels` subintervals (even) per
// nonempty linear segment, nodes aligned to the break abscissas so every
// segment is smooth inside.
AxisRule axis_rule(const TestFunction& f, int axis, std::int64_t panels) {
    const TrapezoidProfile& p = f.axes()[static_cast<std::size_t>(axis)];
    AxisRule rule;
    const double seg[3][2] = {{p.a, p.b}, {p.b, p.c}, {p.c, p.e}};
    for (const auto& s : seg) {
        if (!(s[1] > s[0])) continue;
        const double h = (s[1] - s[0]) / static_cast<double>(panels);
        for (std::int64_t i = 0; i <= panels; ++i) {
            const double x = s[0] + h * static_cast<double>(i);
            double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            rule.weights.push_back(w * h / 3.0);
            rule.profile.push_back(f.profile_value(axis, x));
        }
    }
    return rule;
}

std::complex<double> tensor_estimate(const TestFunction& f, double coeff, std::int64_t panels) {
    const int d = f.dim();
    std::vector<AxisRule> rules;
    rules.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) rules.push_back(axis_rule(f, i, panels));

    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    std::complex<double> acc{0.0, 0.0};
    for (;;) {
        double w = 1.0, prof = 1.0;
        for (int i = 0; i < d; ++i) {
            w *= rules[static_cast<std::size_t>(i)].weights[idx[static_cast<std::size_t>(i)]];
            prof *= rules[static_cast<std::size_t>(i)].profile[idx[static_cast<std::size_t>(i)]];
        }
        const double theta = coeff * prof;
        acc += std::complex<double>(w * (std::cos(theta) - 1.0), w * std::sin(theta));
        int axis = d - 1;
        while (axis >= 0) {
            auto& i = idx[static_cast<std::size_t>(axis)];
            if (++i < rules[static_cast<std::size_t>(axis)].weights.size()) break;
            i = 0;
            --axis;
        }
        if (axis < 0) return acc;
    }
}

}  // namespace

std::complex<double> charfn_integral(const TestFunction& f, double t, double scale) {
    if (!std::isfinite(t) || !std::isfinite(scale))
        throw precondition_error("quadrature needs finite t and scale");
    const double coeff = t * scale * f.amplitude();
    if (coeff == 0.0) return {0.0, 0.0};

    std::int64_t panels = 8;
    std::complex<double> prev = tensor_estimate(f, coeff, panels);
    std::complex<double> before_prev = prev;
    // an axis holds at most 3 segments of `panels` subintervals each
    while (3 * (2 * panels) <= kQuadMaxPanels) {
        panels *= 2;
        const std::complex<double> est = tensor_estimate(f, coeff, panels);
        if (std::abs(est - prev) < kQuadTol) return est;
        before_prev = prev;
        prev = est;
    }
    throw accuracy_error("quadrature failed to converge at the panel cap", prev, before_prev);
}

}  // namespace pslab
