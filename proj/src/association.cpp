#include "pslab/association.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "pslab/charfn.hpp"
#include "pslab/parallel.hpp"
#include "pslab/rng.hpp"

namespace pslab {

JointDistribution::JointDistribution(int coords, std::vector<double> atom_probs)
    : m(coords), probs(std::move(atom_probs)) {
    if (m < 1 || m > kEnumerationCap)
        throw precondition_error("joint distribution supports 1..24 coordinates");
    if (probs.size() != (std::size_t{1} << m))
        throw precondition_error("joint distribution needs 2^m atom probabilities");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw precondition_error("atom probabilities must be nonnegative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw precondition_error("atom probabilities must sum to one");
}

namespace {

void check_sites(const FieldSpec& spec, const std::vector<Point>& sites) {
    if (sites.empty()) throw precondition_error("site list must be nonempty");
    std::set<Point> seen;
    for (const Point& s : sites) {
        if (static_cast<int>(s.size()) != spec.dim())
            throw precondition_error("site dimension does not match the field spec");
        if (!seen.insert(s).second) throw precondition_error("site list has duplicates");
    }
}

// Y sites each X site depends on, sorted; plus per-site masks over that list.
struct Dependency {
    std::vector<Point> y_sites;
    std::vector<std::uint32_t> site_masks;
};

Dependency dependency_of(const FieldSpec& spec, const std::vector<Point>& sites) {
    std::set<Point> ys;
    Point t(static_cast<std::size_t>(spec.dim()));
    for (const Point& s : sites)
        for (const Point& g : spec.offsets()) {
            for (int i = 0; i < spec.dim(); ++i) t[i] = s[i] + g[i];
            ys.insert(t);
        }
    if (static_cast<std::int64_t>(ys.size()) > kEnumerationCap)
        throw feasibility_error("dependency set exceeds the enumeration budget of 24 Y sites");

    Dependency dep;
    dep.y_sites.assign(ys.begin(), ys.end());
    auto index_of = [&](const Point& p) {
        const auto it = std::lower_bound(dep.y_sites.begin(), dep.y_sites.end(), p);
        return static_cast<std::uint32_t>(it - dep.y_sites.begin());
    };
    for (const Point& s : sites) {
        std::uint32_t mask = 0;
        for (const Point& g : spec.offsets()) {
            for (int i = 0; i < spec.dim(); ++i) t[i] = s[i] + g[i];
            mask |= std::uint32_t{1} << index_of(t);
        }
        dep.site_masks.push_back(mask);
    }
    return dep;
}

}  // namespace

JointDistribution window_distribution(const FieldSpec& spec, const std::vector<Point>& sites) {
    check_sites(spec, sites);
    const int m = static_cast<int>(sites.size());
    if (m > kEnumerationCap)
        throw feasibility_error("window distribution supports at most 24 sites");
    const Dependency dep = dependency_of(spec, sites);
    const int k = static_cast<int>(dep.y_sites.size());
    const double q = spec.site_prob();
    const bool is_and = spec.kind() == FieldKind::pattern;

    std::vector<double> pow_q(static_cast<std::size_t>(k) + 1, 1.0);
    std::vector<double> pow_r(static_cast<std::size_t>(k) + 1, 1.0);
    for (int i = 1; i <= k; ++i) {
        pow_q[static_cast<std::size_t>(i)] = pow_q[static_cast<std::size_t>(i - 1)] * q;
        pow_r[static_cast<std::size_t>(i)] = pow_r[static_cast<std::size_t>(i - 1)] * (1.0 - q);
    }

    std::vector<double> probs(std::size_t{1} << m, 0.0);
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t cfg = 0; cfg < total; ++cfg) {
        const auto bits = static_cast<std::uint32_t>(cfg);
        const int ones = std::popcount(bits);
        const double w = pow_q[static_cast<std::size_t>(ones)] * pow_r[static_cast<std::size_t>(k - ones)];
        if (w == 0.0) continue;
        std::uint32_t pattern = 0;
        for (int s = 0; s < m; ++s) {
            const std::uint32_t mask = dep.site_masks[static_cast<std::size_t>(s)];
            const bool on = is_and ? (bits & mask) == mask : (bits & mask) != 0;
            if (on) pattern |= std::uint32_t{1} << s;
        }
        probs[pattern] += w;
    }
    return JointDistribution(m, std::move(probs));
}

std::vector<UpSet> enumerate_upsets(int m) {
    if (m < 1) throw precondition_error("up-set enumeration needs m >= 1");
    if (m > kExactFkgMaxCoords)
        throw feasibility_error("up-set enumeration is capped at m = 4 coordinates");
    const int atoms = 1 << m;
    // bits of patterns reachable by flipping one 0 to 1
    std::vector<std::uint32_t> up_req(static_cast<std::size_t>(atoms), 0);
    for (int p = 0; p < atoms; ++p)
        for (int b = 0; b < m; ++b)
            if (!(p >> b & 1)) up_req[static_cast<std::size_t>(p)] |= std::uint32_t{1} << (p | 1 << b);

    std::vector<UpSet> result;
    const std::uint64_t subsets = std::uint64_t{1} << atoms;
    for (std::uint64_t set = 0; set < subsets; ++set) {
        bool closed = true;
        for (int p = 0; p < atoms && closed; ++p)
            if (set >> p & 1)
                closed = (set & up_req[static_cast<std::size_t>(p)]) == up_req[static_cast<std::size_t>(p)];
        if (closed) result.push_back({m, static_cast<std::uint32_t>(set)});
    }
    return result;
}

FkgCheckResult exact_fkg_check(const JointDistribution& dist) {
    if (dist.m > kExactFkgMaxCoords)
        throw feasibility_error("exact FKG check is capped at m = 4 coordinates");
    const std::vector<UpSet> upsets = enumerate_upsets(dist.m);

    auto mass = [&](std::uint32_t atom_mask) {
        double p = 0.0;
        while (atom_mask != 0) {
            const unsigned b = static_cast<unsigned>(std::countr_zero(atom_mask));
            p += dist.probs[b];
            atom_mask &= atom_mask - 1;
        }
        return p;
    };

    std::vector<double> prob(upsets.size());
    for (std::size_t i = 0; i < upsets.size(); ++i) prob[i] = mass(upsets[i].atoms);

    FkgCheckResult result;
    result.min_cov = 1.0;
    std::size_t arg_i = 0, arg_j = 0;
    for (std::size_t i = 0; i < upsets.size(); ++i)
        for (std::size_t j = 0; j < upsets.size(); ++j) {
            const double cov = mass(upsets[i].atoms & upsets[j].atoms) - prob[i] * prob[j];
            if (cov < result.min_cov) {
                result.min_cov = cov;
                arg_i = i;
                arg_j = j;
            }
        }
    if (!result.certified()) result.witness = std::make_pair(upsets[arg_i], upsets[arg_j]);
    return result;
}

namespace {

struct PairCounts {
    // cell index = 2*f + g over {0,1}^2
    std::array<std::int64_t, 4> cells{0, 0, 0, 0};
};

PairCovariance covariance_from_counts(const PairCounts& c, std::int64_t replicates) {
    const auto r = static_cast<double>(replicates);
    const double n11 = static_cast<double>(c.cells[3]);
    const double n10 = static_cast<double>(c.cells[2]);
    const double n01 = static_cast<double>(c.cells[1]);
    const double n00 = static_cast<double>(c.cells[0]);
    const double f_mean = (n11 + n10) / r;
    const double g_mean = (n11 + n01) / r;

    const double dev_sum = n11 - r * f_mean * g_mean;  // sum of (f - fbar)(g - gbar)
    const double cov = dev_sum / (r - 1.0);

    auto z = [&](double fv, double gv) { return (fv - f_mean) * (gv - g_mean); };
    const double z11 = z(1, 1), z10 = z(1, 0), z01 = z(0, 1), z00 = z(0, 0);
    const double sq = n11 * z11 * z11 + n10 * z10 * z10 + n01 * z01 * z01 + n00 * z00 * z00;
    const double var_z = std::max(0.0, (sq - dev_sum * dev_sum / r) / (r - 1.0));
    return {cov, std::sqrt(var_z / r)};
}

std::vector<PairCounts> run_pairs(const FieldSpec& spec, const std::vector<Point>& sites,
                                  const std::vector<std::pair<MonotoneIndicator, MonotoneIndicator>>& pairs,
                                  std::int64_t replicates, std::uint64_t seed) {
    check_sites(spec, sites);
    if (replicates < 100) throw precondition_error("mc FKG checks need at least 100 replicates");
    if (sites.size() > 64) throw precondition_error("mc FKG checks support at most 64 sites");

    Point lo = sites.front(), hi = sites.front();
    for (const Point& s : sites)
        for (int i = 0; i < spec.dim(); ++i) {
            lo[i] = std::min(lo[i], s[i]);
            hi[i] = std::max(hi[i], s[i]);
        }
    const LatticeWindow window(lo, hi);
    const LatticeWindow padded = padded_window(spec, window);
    const std::vector<std::int64_t> deltas = detail::offset_deltas(spec, padded);
    const bool is_and = spec.kind() == FieldKind::pattern;
    std::vector<std::int64_t> site_flats;
    site_flats.reserve(sites.size());
    for (const Point& s : sites) site_flats.push_back(padded.flat_index(s));

    using Partial = std::vector<PairCounts>;
    auto block_fn = [&](std::int64_t first, std::int64_t last) {
        Partial part(pairs.size());
        std::vector<std::uint8_t> ybuf;
        for (std::int64_t r = first; r < last; ++r) {
            detail::fill_y(spec, padded, derive_stream_seed(seed, static_cast<std::uint64_t>(r)), ybuf);
            std::uint64_t pattern = 0;
            for (std::size_t s = 0; s < site_flats.size(); ++s) {
                std::uint8_t v = is_and ? 1 : 0;
                if (is_and) {
                    for (std::int64_t d : deltas)
                        v &= ybuf[static_cast<std::size_t>(site_flats[s] + d)];
                } else {
                    for (std::int64_t d : deltas)
                        v |= ybuf[static_cast<std::size_t>(site_flats[s] + d)];
                }
                if (v) pattern |= std::uint64_t{1} << s;
            }
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                const int fv = pairs[p].first(pattern) ? 1 : 0;
                const int gv = pairs[p].second(pattern) ? 1 : 0;
                ++part[p].cells[static_cast<std::size_t>(2 * fv + gv)];
            }
        }
        return part;
    };
    auto fold = [](Partial& acc, const Partial& p) {
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (std::size_t c = 0; c < 4; ++c) acc[i].cells[c] += p[i].cells[c];
    };
    return blocked_reduce(replicates, kDefaultBlock, Partial(pairs.size()), block_fn, fold);
}

}  // namespace

PairCovariance mc_pair_covariance(const FieldSpec& spec, const std::vector<Point>& sites,
                                  const MonotoneIndicator& f, const MonotoneIndicator& g,
                                  std::int64_t replicates, std::uint64_t seed) {
    const auto counts = run_pairs(spec, sites, {{f, g}}, replicates, seed);
    return covariance_from_counts(counts[0], replicates);
}

std::vector<McPairResult> mc_fkg_check(const FieldSpec& spec, const std::vector<Point>& sites,
                                       int pairs, std::int64_t replicates, std::uint64_t seed) {
    if (pairs < 1) throw precondition_error("mc_fkg_check needs at least one pair");
    // pair shapes come from a dedicated stream so they never collide with
    // replicate streams
    SplitMix64 gen(derive_stream_seed(seed, 0x8000000000000000ull));
    const std::uint64_t site_mask =
        sites.size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << sites.size()) - 1;
    auto random_indicator = [&]() {
        MonotoneIndicator ind;
        const int n_seeds = 1 + static_cast<int>(gen.next() % 3);
        for (int i = 0; i < n_seeds; ++i) ind.seeds.push_back(gen.next() & site_mask);
        return ind;
    };
    std::vector<std::pair<MonotoneIndicator, MonotoneIndicator>> pair_list;
    pair_list.reserve(static_cast<std::size_t>(pairs));
    for (int i = 0; i < pairs; ++i) pair_list.emplace_back(random_indicator(), random_indicator());

    const auto counts = run_pairs(spec, sites, pair_list, replicates, seed);
    std::vector<McPairResult> results;
    results.reserve(pair_list.size());
    for (std::size_t i = 0; i < pair_list.size(); ++i) {
        const PairCovariance pc = covariance_from_counts(counts[i], replicates);
        results.push_back({pair_list[i].first, pair_list[i].second, pc.cov, pc.se});
    }
    return results;
}

}  // namespace pslab
