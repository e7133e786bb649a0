#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pslab/field.hpp"

namespace pslab {

inline constexpr double kFkgTol = 1e-12;
inline constexpr int kExactFkgMaxCoords = 4;

// Exact joint law of m binary coordinates; probs indexed by bit pattern
// (coordinate i is bit i), summing to one.
struct JointDistribution {
    int m = 0;
    std::vector<double> probs;

    JointDistribution(int coords, std::vector<double> atom_probs);
};

// Exact law of (X_s) over the given sites, by enumerating the underlying Y
// variables on the dependency set. feasibility_error when that set exceeds
// kEnumerationCap sites.
JointDistribution window_distribution(const FieldSpec& spec, const std::vector<Point>& sites);

// An upward-closed subset of {0,1}^m, stored as a bitmask over the 2^m
// patterns. Indicators of up-sets are exactly the 0/1-valued coordinatewise
// nondecreasing functions, so association checks reduce to pairs of them.
struct UpSet {
    int m = 0;
    std::uint32_t atoms = 0;  // bit p set <=> pattern p belongs

    bool contains(unsigned pattern) const { return (atoms >> pattern) & 1u; }
};

// All up-sets of {0,1}^m in ascending atom-mask order; the counts follow the
// Dedekind numbers 3, 6, 20, 168 for m = 1..4. feasibility_error for m > 4.
std::vector<UpSet> enumerate_upsets(int m);

struct FkgCheckResult {
    double min_cov = 0;
    // Minimizing pair, attached when the distribution is rejected.
    std::optional<std::pair<UpSet, UpSet>> witness;

    bool certified() const { return min_cov >= -kFkgTol; }
};

// Minimum of cov(1_U, 1_V) over all ordered pairs of up-sets. Nonnegative for
// every associated law; a negative minimum certifies non-association and the
// witness pair shows it.
FkgCheckResult exact_fkg_check(const JointDistribution& dist);

// A monotone 0/1 function of m coordinates: the upward closure of a seed set,
// evaluated as "pattern dominates some seed". Supports m up to 64.
struct MonotoneIndicator {
    std::vector<std::uint64_t> seeds;

    bool operator()(std::uint64_t pattern) const {
        for (std::uint64_t s : seeds)
            if ((pattern & s) == s) return true;
        return false;
    }
};

struct PairCovariance {
    double cov = 0;
    double se = 0;
};

// Unbiased covariance estimate for one pair of monotone indicators evaluated
// on the X values at `sites`, over independent replicates with derived seeds.
// With 0/1 indicators the estimate reduces to exact integer contingency
// counts, so results are reproducible at any thread count.
PairCovariance mc_pair_covariance(const FieldSpec& spec, const std::vector<Point>& sites,
                                  const MonotoneIndicator& f, const MonotoneIndicator& g,
                                  std::int64_t replicates, std::uint64_t seed);

struct McPairResult {
    MonotoneIndicator f, g;
    double cov = 0;
    double se = 0;
};

// Draws `pairs` random monotone-indicator pairs (upward closures of random
// seed sets) and estimates each covariance on a shared replicate stream.
std::vector<McPairResult> mc_fkg_check(const FieldSpec& spec, const std::vector<Point>& sites,
                                       int pairs, std::int64_t replicates, std::uint64_t seed);

}  // namespace pslab
