#include "pslab/field.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pslab/rng.hpp"

namespace pslab {

namespace {

double pow_int(double base, std::int64_t exp) {
    double r = 1.0;
    for (std::int64_t i = 0; i < exp; ++i) r *= base;
    return r;
}

void check_points(const std::vector<Point>& pts, int d, const char* what) {
    if (pts.empty()) throw invalid_spec_error(std::string(what) + " must be nonempty");
    std::set<Point> seen;
    for (const Point& p : pts) {
        if (static_cast<int>(p.size()) != d)
            throw invalid_spec_error(std::string(what) + " has a point of wrong dimension");
        if (!seen.insert(p).second)
            throw invalid_spec_error(std::string(what) + " has duplicate points");
    }
}

}  // namespace

FieldSpec FieldSpec::pattern(int d, std::int64_t n, double lambda, std::vector<Point> shape) {
    if (d < 1) throw invalid_spec_error("dimension must be positive");
    if (n < 1) throw invalid_spec_error("scale n must be positive");
    if (!(lambda > 0) || !std::isfinite(lambda)) throw invalid_spec_error("lambda must be positive");
    check_points(shape, d, "pattern set G");

    FieldSpec s;
    s.kind_ = FieldKind::pattern;
    s.d_ = d;
    s.n_ = n;
    s.lambda_ = lambda;
    s.shape_ = std::move(shape);
    const auto m = static_cast<double>(s.shape_.size());
    const double p = lambda / pow_int(static_cast<double>(n), d);
    s.q_ = std::pow(p, 1.0 / m);
    if (!(s.q_ > 0) || s.q_ > 1.0)
        throw invalid_spec_error("site probability q = (lambda/n^d)^(1/|G|) must lie in (0,1]");

    s.offsets_ = s.shape_;
    std::sort(s.offsets_.begin(), s.offsets_.end());
    s.min_off_.assign(d, 0);
    s.max_off_.assign(d, 0);
    for (int i = 0; i < d; ++i) {
        Coord mn = s.offsets_[0][i], mx = s.offsets_[0][i];
        for (const Point& g : s.offsets_) {
            mn = std::min(mn, g[i]);
            mx = std::max(mx, g[i]);
        }
        s.min_off_[i] = mn;
        s.max_off_[i] = mx;
    }

    std::set<Point> lags;
    for (const Point& g1 : s.shape_)
        for (const Point& g2 : s.shape_) {
            Point diff(d);
            for (int i = 0; i < d; ++i) diff[i] = g1[i] - g2[i];
            if (diff != Point(d, 0)) lags.insert(std::move(diff));
        }
    s.lags_.assign(lags.begin(), lags.end());
    return s;
}

FieldSpec FieldSpec::or_field(std::int64_t n, double lambda) {
    if (n < 1) throw invalid_spec_error("scale n must be positive");
    if (!(lambda > 0) || !std::isfinite(lambda)) throw invalid_spec_error("lambda must be positive");
    const double q = lambda / static_cast<double>(n);
    if (q > 1.0) throw invalid_spec_error("site probability q = lambda/n must lie in (0,1]");

    FieldSpec s;
    s.kind_ = FieldKind::or_field;
    s.d_ = 1;
    s.n_ = n;
    s.lambda_ = lambda;
    s.q_ = q;
    s.offsets_ = {Point{0}, Point{1}};
    s.min_off_ = Point{0};
    s.max_off_ = Point{1};
    s.lags_ = {Point{-1}, Point{1}};
    return s;
}

FieldSpec FieldSpec::with_scale(std::int64_t n) const {
    if (kind_ == FieldKind::pattern) return pattern(d_, n, lambda_, shape_);
    return or_field(n, lambda_);
}

double FieldSpec::marginal_prob() const {
    if (kind_ == FieldKind::pattern) return pow_int(q_, static_cast<std::int64_t>(shape_.size()));
    return 2.0 * q_ - q_ * q_;
}

std::int64_t union_size(const std::vector<Point>& shape, const Point& j) {
    if (shape.empty()) throw precondition_error("union_size needs a nonempty set");
    if (j == Point(j.size(), 0) || j.size() != shape.front().size())
        throw std::domain_error("union_size needs a nonzero translation of matching dimension");
    std::set<Point> u(shape.begin(), shape.end());
    for (const Point& g : shape) {
        Point t(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) t[i] = g[i] + j[i];
        u.insert(std::move(t));
    }
    return static_cast<std::int64_t>(u.size());
}

double exact_cov(const FieldSpec& spec, const Point& j) {
    if (static_cast<int>(j.size()) != spec.dim() || j == Point(j.size(), 0))
        throw std::domain_error("exact_cov needs a nonzero lag of matching dimension");
    const double q = spec.site_prob();
    if (spec.kind() == FieldKind::pattern) {
        const auto m = static_cast<std::int64_t>(spec.pattern_set().size());
        const std::int64_t u = union_size(spec.pattern_set(), j);
        if (u == 2 * m) return 0.0;  // disjoint translate: independent blocks
        return pow_int(q, u) - pow_int(q, 2 * m);
    }
    if (j[0] == 1 || j[0] == -1) {
        const double r = 1.0 - q;
        return q * r * r * r;
    }
    return 0.0;
}

double sigma(const FieldSpec& spec) {
    double total = 0.0;
    for (const Point& j : spec.lag_set()) total += exact_cov(spec, j);
    return total;
}

std::vector<DecayRow> decay_diagnostic(const FieldSpec& base, const std::vector<std::int64_t>& n_values) {
    std::vector<DecayRow> rows;
    rows.reserve(n_values.size());
    for (std::int64_t n : n_values) {
        const FieldSpec s = base.with_scale(n);
        const double sig = sigma(s);
        double nd = 1.0;
        for (int i = 0; i < s.dim(); ++i) nd *= static_cast<double>(n);
        rows.push_back({n, sig, nd * sig});
    }
    return rows;
}

LatticeWindow padded_window(const FieldSpec& spec, const LatticeWindow& window) {
    if (window.dim() != spec.dim())
        throw precondition_error("window dimension does not match the field spec");
    Point lo = window.lo(), hi = window.hi();
    for (int i = 0; i < spec.dim(); ++i) {
        lo[i] += spec.min_offset()[i];
        hi[i] += spec.max_offset()[i];
    }
    return LatticeWindow(std::move(lo), std::move(hi));
}

namespace detail {

std::vector<std::int64_t> offset_deltas(const FieldSpec& spec, const LatticeWindow& padded) {
    std::vector<std::int64_t> deltas;
    deltas.reserve(spec.offsets().size());
    for (const Point& g : spec.offsets()) {
        std::int64_t delta = 0;
        for (int i = 0; i < spec.dim(); ++i) delta += g[i] * padded.stride(i);
        deltas.push_back(delta);
    }
    return deltas;
}

void fill_y(const FieldSpec& spec, const LatticeWindow& padded, std::uint64_t seed,
            std::vector<std::uint8_t>& y) {
    y.resize(static_cast<std::size_t>(padded.size()));
    SplitMix64 rng(seed);
    const double q = spec.site_prob();
    for (auto& v : y) v = rng.next_bernoulli(q) ? 1 : 0;
}

void derive_x(const FieldSpec& spec, const LatticeWindow& window, const LatticeWindow& padded,
              const std::vector<std::uint8_t>& y, std::vector<std::uint8_t>& x) {
    x.resize(static_cast<std::size_t>(window.size()));
    const std::vector<std::int64_t> deltas = offset_deltas(spec, padded);
    const bool is_and = spec.kind() == FieldKind::pattern;
    for_each_row(window, padded, [&](std::int64_t wbase, std::int64_t pbase, std::int64_t len) {
        for (std::int64_t i = 0; i < len; ++i) {
            std::uint8_t v = is_and ? 1 : 0;
            if (is_and) {
                for (std::int64_t delta : deltas) v &= y[static_cast<std::size_t>(pbase + i + delta)];
            } else {
                for (std::int64_t delta : deltas) v |= y[static_cast<std::size_t>(pbase + i + delta)];
            }
            x[static_cast<std::size_t>(wbase + i)] = v;
        }
    });
}

}  // namespace detail

FieldSample sample_field(const FieldSpec& spec, const LatticeWindow& window, std::uint64_t seed) {
    LatticeWindow padded = padded_window(spec, window);
    FieldSample s{spec, window, padded, seed, {}, {}};
    detail::fill_y(spec, s.padded, seed, s.y);
    detail::derive_x(spec, s.window, s.padded, s.y, s.x);
    return s;
}

bool FieldSample::x_consistent() const {
    std::vector<std::uint8_t> again;
    detail::derive_x(spec, window, padded, y, again);
    return again == x;
}

}  // namespace pslab
