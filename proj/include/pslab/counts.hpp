#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pslab/field.hpp"
#include "pslab/grid.hpp"

namespace pslab {

enum class ReferenceKind { poisson, compound2 };

inline constexpr std::int64_t kJackknifeBlock = 1000;

// Empirical distribution of box counts over replicates. Blocks of
// kJackknifeBlock consecutive replicates carry falling-factorial sums
// (orders 1..4) so factorial_moments can jackknife its standard errors.
struct CountHistogram {
    std::map<std::int64_t, std::int64_t> counts;
    std::int64_t replicates = 0;
    std::vector<std::array<double, 4>> block_fact_sums;

    // provenance, when produced by count_experiment
    std::optional<FieldSpec> spec;
    std::optional<BoxRegion> box;
    std::uint64_t seed = 0;

    std::int64_t max_count() const { return counts.empty() ? 0 : counts.rbegin()->first; }

    // Builds a histogram from an explicit replicate sequence (synthetic data,
    // tests). Block structure follows the sequence order.
    static CountHistogram from_sequence(const std::vector<std::int64_t>& replicate_counts);
};

// Histogram of mu_n(A) over independent replicates with derived seeds.
// Deterministic for a given seed at any thread count.
CountHistogram count_experiment(const FieldSpec& spec, const BoxRegion& box,
                                std::int64_t replicates, std::uint64_t seed);

namespace reference {
// Serial sample-by-sample implementation kept for testing; must produce the
// identical histogram.
CountHistogram count_experiment(const FieldSpec& spec, const BoxRegion& box,
                                std::int64_t replicates, std::uint64_t seed);
}  // namespace reference

// P{N = k}: e^-L L^k / k! for poisson; for compound2 the count is twice a
// Poisson variable, so mass sits on even k only.
double reference_pmf(ReferenceKind kind, double lambda_eff, std::int64_t k);

// (1/2) sum_k |empirical(k) - reference(k)| including the reference tail
// beyond the largest observed count. In [0, 1].
double tv_distance(const CountHistogram& hist, ReferenceKind kind, double lambda_eff);

struct MomentEstimate {
    double value = 0;
    double se = 0;  // leave-one-block-out jackknife; NaN with fewer than 2 blocks
};

// Empirical factorial moments E[N(N-1)...(N-r+1)], r = 1..r_max (r_max <= 4).
std::vector<MomentEstimate> factorial_moments(const CountHistogram& hist, int r_max);

// Fraction of replicates with an odd count.
double odd_fraction(const CountHistogram& hist);

// Reference intensity conventions. The volume form is the limit value; the
// lattice form matches the exact finite-n mean |Z^d ∩ nA| p_n / mass, removing
// the O(1/n) bias from boundary lattice points.
double lambda_eff_volume(const FieldSpec& spec, const BoxRegion& box);
double lambda_eff_lattice(const FieldSpec& spec, const BoxRegion& box);

}  // namespace pslab
