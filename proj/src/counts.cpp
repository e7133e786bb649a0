#include "pslab/counts.hpp"

#include <cmath>
#include <limits>

#include "pslab/measure.hpp"
#include "pslab/parallel.hpp"
#include "pslab/rng.hpp"

namespace pslab {

namespace {

std::array<double, 4> falling_factorials(std::int64_t k) {
    const auto kd = static_cast<double>(k);
    return {kd, kd * (kd - 1.0), kd * (kd - 1.0) * (kd - 2.0),
            kd * (kd - 1.0) * (kd - 2.0) * (kd - 3.0)};
}

struct CountPartial {
    std::map<std::int64_t, std::int64_t> hist;
    std::array<double, 4> fact{0.0, 0.0, 0.0, 0.0};
};

// count_of(replicate, scratch) -> box count; scratch is block-local so blocks
// can run on any thread.
template <class CountFn>
CountHistogram accumulate_counts(std::int64_t replicates, CountFn&& count_of, bool parallel) {
    if (replicates < 1) throw precondition_error("count experiments need at least one replicate");
    auto block_fn = [&](std::int64_t first, std::int64_t last) {
        CountPartial part;
        std::vector<std::uint8_t> scratch;
        for (std::int64_t r = first; r < last; ++r) {
            const std::int64_t k = count_of(r, scratch);
            ++part.hist[k];
            const auto ff = falling_factorials(k);
            for (std::size_t i = 0; i < 4; ++i) part.fact[i] += ff[i];
        }
        return part;
    };
    auto fold = [](CountHistogram& acc, const CountPartial& p) {
        for (const auto& [k, c] : p.hist) acc.counts[k] += c;
        acc.block_fact_sums.push_back(p.fact);
    };
    CountHistogram init;
    init.replicates = replicates;
    return blocked_reduce(replicates, kJackknifeBlock, std::move(init), block_fn, fold, parallel);
}

CountHistogram count_experiment_impl(const FieldSpec& spec, const BoxRegion& box,
                                     std::int64_t replicates, std::uint64_t seed, bool fast,
                                     bool parallel) {
    if (box.dim() != spec.dim())
        throw precondition_error("box dimension does not match the field spec");
    const auto sites = lattice_box(box, spec.scale());

    CountHistogram hist;
    if (!sites) {
        // no lattice points in the scaled box: every replicate counts zero
        hist = accumulate_counts(
            replicates, [](std::int64_t, std::vector<std::uint8_t>&) { return std::int64_t{0}; },
            parallel);
    } else if (fast) {
        const LatticeWindow window = *sites;
        const LatticeWindow padded = padded_window(spec, window);
        const std::vector<std::int64_t> deltas = detail::offset_deltas(spec, padded);
        const bool is_and = spec.kind() == FieldKind::pattern;
        auto count_of = [&](std::int64_t r, std::vector<std::uint8_t>& ybuf) {
            detail::fill_y(spec, padded, derive_stream_seed(seed, static_cast<std::uint64_t>(r)),
                           ybuf);
            std::int64_t count = 0;
            for_each_row(window, padded, [&](std::int64_t, std::int64_t pbase, std::int64_t len) {
                for (std::int64_t i = 0; i < len; ++i) {
                    std::uint8_t v = is_and ? 1 : 0;
                    if (is_and) {
                        for (std::int64_t d : deltas) v &= ybuf[static_cast<std::size_t>(pbase + i + d)];
                    } else {
                        for (std::int64_t d : deltas) v |= ybuf[static_cast<std::size_t>(pbase + i + d)];
                    }
                    count += v;
                }
            });
            return count;
        };
        hist = accumulate_counts(replicates, count_of, parallel);
    } else {
        const LatticeWindow window = *sites;
        auto count_of = [&](std::int64_t r, std::vector<std::uint8_t>&) {
            const FieldSample s =
                sample_field(spec, window, derive_stream_seed(seed, static_cast<std::uint64_t>(r)));
            return measure_of_box(s, box);
        };
        hist = accumulate_counts(replicates, count_of, parallel);
    }
    hist.spec = spec;
    hist.box = box;
    hist.seed = seed;
    return hist;
}

}  // namespace

CountHistogram CountHistogram::from_sequence(const std::vector<std::int64_t>& replicate_counts) {
    return accumulate_counts(
        static_cast<std::int64_t>(replicate_counts.size()),
        [&](std::int64_t r, std::vector<std::uint8_t>&) {
            return replicate_counts[static_cast<std::size_t>(r)];
        },
        /*parallel=*/false);
}

CountHistogram count_experiment(const FieldSpec& spec, const BoxRegion& box,
                                std::int64_t replicates, std::uint64_t seed) {
    return count_experiment_impl(spec, box, replicates, seed, /*fast=*/true, /*parallel=*/true);
}

namespace reference {
CountHistogram count_experiment(const FieldSpec& spec, const BoxRegion& box,
                                std::int64_t replicates, std::uint64_t seed) {
    return count_experiment_impl(spec, box, replicates, seed, /*fast=*/false, /*parallel=*/false);
}
}  // namespace reference

double reference_pmf(ReferenceKind kind, double lambda_eff, std::int64_t k) {
    if (!(lambda_eff > 0) || !std::isfinite(lambda_eff))
        throw precondition_error("reference intensity must be positive");
    if (k < 0) return 0.0;
    if (kind == ReferenceKind::compound2) {
        if (k % 2 != 0) return 0.0;
        k /= 2;
    }
    const auto kd = static_cast<double>(k);
    return std::exp(-lambda_eff + kd * std::log(lambda_eff) - std::lgamma(kd + 1.0));
}

double tv_distance(const CountHistogram& hist, ReferenceKind kind, double lambda_eff) {
    if (hist.replicates < 1) throw precondition_error("tv_distance needs replicates >= 1");
    const auto r = static_cast<double>(hist.replicates);
    double abs_sum = 0.0, ref_sum = 0.0;
    for (std::int64_t k = 0; k <= hist.max_count(); ++k) {
        const auto it = hist.counts.find(k);
        const double emp = it == hist.counts.end() ? 0.0 : static_cast<double>(it->second) / r;
        const double ref = reference_pmf(kind, lambda_eff, k);
        abs_sum += std::abs(emp - ref);
        ref_sum += ref;
    }
    return 0.5 * (abs_sum + std::max(0.0, 1.0 - ref_sum));
}

std::vector<MomentEstimate> factorial_moments(const CountHistogram& hist, int r_max) {
    if (r_max < 1 || r_max > 4) throw precondition_error("factorial moments support r_max in 1..4");
    if (hist.replicates < 1) throw precondition_error("factorial moments need replicates >= 1");
    const auto n = static_cast<double>(hist.replicates);
    const auto& blocks = hist.block_fact_sums;
    const auto b_count = static_cast<std::int64_t>(blocks.size());

    std::vector<MomentEstimate> result;
    for (int r = 1; r <= r_max; ++r) {
        const auto ri = static_cast<std::size_t>(r - 1);
        double total = 0.0;
        for (const auto& b : blocks) total += b[ri];
        MomentEstimate est;
        est.value = total / n;
        if (b_count >= 2) {
            // leave-one-block-out jackknife; the tail block may be short
            std::vector<double> loo(static_cast<std::size_t>(b_count));
            double mean_loo = 0.0;
            for (std::int64_t b = 0; b < b_count; ++b) {
                const std::int64_t size = (b == b_count - 1)
                                              ? hist.replicates - kJackknifeBlock * (b_count - 1)
                                              : kJackknifeBlock;
                loo[static_cast<std::size_t>(b)] =
                    (total - blocks[static_cast<std::size_t>(b)][ri]) /
                    (n - static_cast<double>(size));
                mean_loo += loo[static_cast<std::size_t>(b)];
            }
            mean_loo /= static_cast<double>(b_count);
            double ss = 0.0;
            for (double v : loo) ss += (v - mean_loo) * (v - mean_loo);
            est.se = std::sqrt(ss * static_cast<double>(b_count - 1) / static_cast<double>(b_count));
        } else {
            est.se = std::numeric_limits<double>::quiet_NaN();
        }
        result.push_back(est);
    }
    return result;
}

double odd_fraction(const CountHistogram& hist) {
    if (hist.replicates < 1) throw precondition_error("odd_fraction needs replicates >= 1");
    std::int64_t odd = 0;
    for (const auto& [k, c] : hist.counts)
        if (k % 2 != 0) odd += c;
    return static_cast<double>(odd) / static_cast<double>(hist.replicates);
}

double lambda_eff_volume(const FieldSpec& spec, const BoxRegion& box) {
    return spec.intensity() * box.volume();
}

double lambda_eff_lattice(const FieldSpec& spec, const BoxRegion& box) {
    const auto sites = lattice_box(box, spec.scale());
    if (!sites) return 0.0;
    return static_cast<double>(sites->size()) * spec.marginal_prob() /
           static_cast<double>(spec.limit_mass());
}

}  // namespace pslab
