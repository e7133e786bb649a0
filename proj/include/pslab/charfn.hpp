#pragma once

#include <complex>
#include <cstdint>
#include <optional>

#include "pslab/field.hpp"
#include "pslab/test_function.hpp"

namespace pslab {

// Exact Y-site budget for brute-force enumeration (2^24 terms at most).
inline constexpr int kEnumerationCap = 24;

// Product of the marginal characteristic factors over the lattice support:
// prod_j (1 + p_n (e^{i t f(j/n)} - 1)). Exact finite product; sites with
// f(j/n) = 0 contribute a factor of one.
std::complex<double> product_charfn(double t, const TestFunction& f, const FieldSpec& spec);

// Limit characteristic value exp(lambda * ∫ (e^{i t mass f(x)} - 1) dx).
// mass 1 is the Poisson limit; mass 2 the paired-atom variant.
std::complex<double> limit_charfn(double t, const TestFunction& f, double lambda, int mass);

struct NewmanBound {
    double tight;   // (t^2/2) sum over ordered support pairs of f f cov
    double coarse;  // (t^2 ||f||^2 / 2) |support| sigma(n); always >= tight
};

// Covariance bound on |E e^{i sum r_j X_j} - prod E e^{i r_j X_j}| with
// r_j = t f(j/n). `tight` keeps the f-weights and exact covariances; `coarse`
// relaxes through the sup-norm and sigma(n).
NewmanBound newman_bound(double t, const TestFunction& f, const FieldSpec& spec);

// Y sites the exact enumeration would have to sweep (padded support window).
std::int64_t enumeration_sites(const TestFunction& f, const FieldSpec& spec);
bool exact_charfn_feasible(const TestFunction& f, const FieldSpec& spec);

// E e^{i t ∫ f dmu_n} without approximation: sweeps all 2^k configurations of
// the underlying Y sites, weighting each by its product probability.
// feasibility_error when k exceeds kEnumerationCap.
std::complex<double> exact_charfn(double t, const TestFunction& f, const FieldSpec& spec);

struct McEstimate {
    std::complex<double> value;
    double se;  // Euclidean combination of the componentwise standard errors
};

// Monte Carlo estimate of E e^{i t ∫ f dmu_n} over independent replicates with
// per-replicate derived seeds; bit-reproducible for a given seed at any thread
// count.
McEstimate mc_charfn(double t, const TestFunction& f, const FieldSpec& spec,
                     std::int64_t replicates, std::uint64_t seed);

// Everything the limit analysis needs for one (t, f, spec): the product value,
// the family's limit value, both covariance bounds, the Monte Carlo estimate,
// and the brute-force value whenever it is feasible.
struct CharfnReport {
    double t = 0;
    std::complex<double> i1;
    std::complex<double> phi;
    double bound_tight = 0;
    double bound_coarse = 0;
    McEstimate mc;
    std::optional<std::complex<double>> exact;
    std::int64_t replicates = 0;
};

CharfnReport charfn_report(double t, const TestFunction& f, const FieldSpec& spec,
                           std::int64_t replicates, std::uint64_t seed);

namespace reference {

// Straightforward serial implementations kept as the oracle the fast kernels
// are tested against (bit-identical results required).
McEstimate mc_charfn(double t, const TestFunction& f, const FieldSpec& spec,
                     std::int64_t replicates, std::uint64_t seed);
std::complex<double> exact_charfn(double t, const TestFunction& f, const FieldSpec& spec);

}  // namespace reference

}  // namespace pslab
