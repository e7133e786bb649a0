#include "pslab/charfn.hpp"

#include <bit>
#include <cmath>

#include "pslab/measure.hpp"
#include "pslab/parallel.hpp"
#include "pslab/rng.hpp"

namespace pslab {

namespace {

constexpr std::int64_t kEnumBlock = std::int64_t{1} << 14;

std::complex<double> unit_phase(double theta) {
    return {std::cos(theta), std::sin(theta)};
}

// Site masks over the padded Y window for every support site with f(j/n) != 0.
struct SiteTerm {
    std::uint32_t mask;
    double f_value;
};

struct EnumSetup {
    int y_sites = 0;
    bool all_of_mask = true;  // pattern: Y must be 1 on all mask bits; or_field: on any
    std::vector<SiteTerm> terms;
    std::vector<double> weight_one;   // q^i
    std::vector<double> weight_zero;  // (1-q)^i
};

EnumSetup enumeration_setup(const TestFunction& f, const FieldSpec& spec) {
    EnumSetup setup;
    setup.all_of_mask = spec.kind() == FieldKind::pattern;
    const auto supp = support_window(f, spec.scale());
    if (!supp) return setup;

    const LatticeWindow padded = padded_window(spec, *supp);
    if (padded.size() > kEnumerationCap)
        throw feasibility_error("exact enumeration would sweep more than 2^24 configurations");
    setup.y_sites = static_cast<int>(padded.size());

    const std::vector<double> vals = support_values(f, spec.scale(), *supp);
    const std::vector<Point> pts = window_points(*supp);
    for (std::size_t s = 0; s < pts.size(); ++s) {
        if (vals[s] == 0.0) continue;  // factor of one
        std::uint32_t mask = 0;
        Point y = pts[s];
        for (const Point& g : spec.offsets()) {
            for (int i = 0; i < spec.dim(); ++i) y[i] = pts[s][i] + g[i];
            mask |= std::uint32_t{1} << padded.flat_index(y);
        }
        setup.terms.push_back({mask, vals[s]});
    }

    const double q = spec.site_prob();
    setup.weight_one.resize(static_cast<std::size_t>(setup.y_sites) + 1);
    setup.weight_zero.resize(static_cast<std::size_t>(setup.y_sites) + 1);
    setup.weight_one[0] = setup.weight_zero[0] = 1.0;
    for (int i = 1; i <= setup.y_sites; ++i) {
        setup.weight_one[static_cast<std::size_t>(i)] = setup.weight_one[static_cast<std::size_t>(i - 1)] * q;
        setup.weight_zero[static_cast<std::size_t>(i)] = setup.weight_zero[static_cast<std::size_t>(i - 1)] * (1.0 - q);
    }
    return setup;
}

std::complex<double> enumerate_charfn(double t, const EnumSetup& setup, bool parallel) {
    const std::int64_t total = std::int64_t{1} << setup.y_sites;
    auto block_fn = [&](std::int64_t first, std::int64_t last) {
        std::complex<double> acc{0.0, 0.0};
        for (std::int64_t cfg = first; cfg < last; ++cfg) {
            const auto bits = static_cast<std::uint32_t>(cfg);
            const int ones = std::popcount(bits);
            const double w = setup.weight_one[static_cast<std::size_t>(ones)] *
                             setup.weight_zero[static_cast<std::size_t>(setup.y_sites - ones)];
            if (w == 0.0) continue;
            double sum_f = 0.0;
            if (setup.all_of_mask) {
                for (const SiteTerm& term : setup.terms)
                    if ((bits & term.mask) == term.mask) sum_f += term.f_value;
            } else {
                for (const SiteTerm& term : setup.terms)
                    if ((bits & term.mask) != 0) sum_f += term.f_value;
            }
            acc += w * unit_phase(t * sum_f);
        }
        return acc;
    };
    auto fold = [](std::complex<double>& acc, const std::complex<double>& p) { acc += p; };
    return blocked_reduce(total, kEnumBlock, std::complex<double>{0.0, 0.0}, block_fn, fold, parallel);
}

struct McPartial {
    std::complex<double> sum{0.0, 0.0};
    double sum_sq_re = 0.0;
    double sum_sq_im = 0.0;
};

McEstimate finish_mc(const McPartial& p, std::int64_t replicates) {
    const auto r = static_cast<double>(replicates);
    const std::complex<double> mean = p.sum / r;
    const double var_re = std::max(0.0, (p.sum_sq_re - p.sum.real() * mean.real()) / (r - 1.0));
    const double var_im = std::max(0.0, (p.sum_sq_im - p.sum.imag() * mean.imag()) / (r - 1.0));
    return {mean, std::sqrt((var_re + var_im) / r)};
}

McEstimate mc_charfn_impl(double t, const TestFunction& f, const FieldSpec& spec,
                          std::int64_t replicates, std::uint64_t seed, bool fast, bool parallel) {
    if (replicates < 2) throw precondition_error("mc_charfn needs at least 2 replicates");
    const auto supp = support_window(f, spec.scale());
    if (!supp) return {{1.0, 0.0}, 0.0};  // empty support: the integral is 0 for every sample

    const LatticeWindow window = *supp;
    const LatticeWindow padded = padded_window(spec, window);
    const std::vector<double> vals = support_values(f, spec.scale(), window);
    const std::vector<std::int64_t> deltas = detail::offset_deltas(spec, padded);
    const bool is_and = spec.kind() == FieldKind::pattern;

    auto block_fn = [&](std::int64_t first, std::int64_t last) {
        McPartial part;
        std::vector<std::uint8_t> ybuf;
        for (std::int64_t r = first; r < last; ++r) {
            const std::uint64_t rep_seed = derive_stream_seed(seed, static_cast<std::uint64_t>(r));
            double integral = 0.0;
            if (fast) {
                detail::fill_y(spec, padded, rep_seed, ybuf);
                for_each_row(window, padded,
                             [&](std::int64_t sbase, std::int64_t pbase, std::int64_t len) {
                                 for (std::int64_t i = 0; i < len; ++i) {
                                     std::uint8_t v = is_and ? 1 : 0;
                                     if (is_and) {
                                         for (std::int64_t d : deltas)
                                             v &= ybuf[static_cast<std::size_t>(pbase + i + d)];
                                     } else {
                                         for (std::int64_t d : deltas)
                                             v |= ybuf[static_cast<std::size_t>(pbase + i + d)];
                                     }
                                     integral += vals[static_cast<std::size_t>(sbase + i)] *
                                                 static_cast<double>(v);
                                 }
                             });
            } else {
                const FieldSample s = sample_field(spec, window, rep_seed);
                integral = integral_against(f, s);
            }
            const std::complex<double> v = unit_phase(t * integral);
            part.sum += v;
            part.sum_sq_re += v.real() * v.real();
            part.sum_sq_im += v.imag() * v.imag();
        }
        return part;
    };
    auto fold = [](McPartial& acc, const McPartial& p) {
        acc.sum += p.sum;
        acc.sum_sq_re += p.sum_sq_re;
        acc.sum_sq_im += p.sum_sq_im;
    };
    const McPartial total =
        blocked_reduce(replicates, kDefaultBlock, McPartial{}, block_fn, fold, parallel);
    return finish_mc(total, replicates);
}

}  // namespace

std::complex<double> product_charfn(double t, const TestFunction& f, const FieldSpec& spec) {
    const auto supp = support_window(f, spec.scale());
    if (!supp) return {1.0, 0.0};
    const std::vector<double> vals = support_values(f, spec.scale(), *supp);
    const double p = spec.marginal_prob();
    std::complex<double> prod{1.0, 0.0};
    for (double v : vals) {
        if (v == 0.0) continue;
        const std::complex<double> factor = 1.0 + p * (unit_phase(t * v) - 1.0);
        prod *= factor;
    }
    return prod;
}

std::complex<double> limit_charfn(double t, const TestFunction& f, double lambda, int mass) {
    if (mass != 1 && mass != 2) throw precondition_error("limit mass must be 1 or 2");
    if (!(lambda > 0) || !std::isfinite(lambda))
        throw precondition_error("limit intensity must be positive");
    return std::exp(lambda * charfn_integral(f, t, static_cast<double>(mass)));
}

NewmanBound newman_bound(double t, const TestFunction& f, const FieldSpec& spec) {
    const auto supp = support_window(f, spec.scale());
    if (!supp) return {0.0, 0.0};
    const LatticeWindow window = *supp;
    const std::vector<double> vals = support_values(f, spec.scale(), window);
    const std::vector<Point> pts = window_points(window);

    double weighted = 0.0;
    for (const Point& lag : spec.lag_set()) {
        const double cov = exact_cov(spec, lag);
        if (cov == 0.0) continue;
        double pair_sum = 0.0;
        Point shifted(static_cast<std::size_t>(spec.dim()));
        for (std::size_t s = 0; s < pts.size(); ++s) {
            for (int i = 0; i < spec.dim(); ++i) shifted[i] = pts[s][i] + lag[i];
            if (!window.contains(shifted)) continue;
            pair_sum += vals[s] * vals[static_cast<std::size_t>(window.flat_index(shifted))];
        }
        weighted += cov * pair_sum;
    }

    const double half_t2 = 0.5 * t * t;
    const double tight = half_t2 * weighted;
    const double norm = f.sup_norm();
    const double coarse =
        half_t2 * norm * norm * static_cast<double>(window.size()) * sigma(spec);
    return {tight, coarse};
}

std::int64_t enumeration_sites(const TestFunction& f, const FieldSpec& spec) {
    const auto supp = support_window(f, spec.scale());
    if (!supp) return 0;
    return padded_window(spec, *supp).size();
}

bool exact_charfn_feasible(const TestFunction& f, const FieldSpec& spec) {
    return enumeration_sites(f, spec) <= kEnumerationCap;
}

std::complex<double> exact_charfn(double t, const TestFunction& f, const FieldSpec& spec) {
    const EnumSetup setup = enumeration_setup(f, spec);
    return enumerate_charfn(t, setup, /*parallel=*/true);
}

McEstimate mc_charfn(double t, const TestFunction& f, const FieldSpec& spec,
                     std::int64_t replicates, std::uint64_t seed) {
    return mc_charfn_impl(t, f, spec, replicates, seed, /*fast=*/true, /*parallel=*/true);
}

CharfnReport charfn_report(double t, const TestFunction& f, const FieldSpec& spec,
                           std::int64_t replicates, std::uint64_t seed) {
    CharfnReport report;
    report.t = t;
    report.replicates = replicates;
    report.i1 = product_charfn(t, f, spec);
    report.phi = limit_charfn(t, f, spec.intensity(), spec.limit_mass());
    const NewmanBound bound = newman_bound(t, f, spec);
    report.bound_tight = bound.tight;
    report.bound_coarse = bound.coarse;
    report.mc = mc_charfn(t, f, spec, replicates, seed);
    if (exact_charfn_feasible(f, spec)) report.exact = exact_charfn(t, f, spec);
    return report;
}

namespace reference {

McEstimate mc_charfn(double t, const TestFunction& f, const FieldSpec& spec,
                     std::int64_t replicates, std::uint64_t seed) {
    return mc_charfn_impl(t, f, spec, replicates, seed, /*fast=*/false, /*parallel=*/false);
}

std::complex<double> exact_charfn(double t, const TestFunction& f, const FieldSpec& spec) {
    const EnumSetup setup = enumeration_setup(f, spec);
    return enumerate_charfn(t, setup, /*parallel=*/false);
}

}  // namespace reference

}  // namespace pslab
