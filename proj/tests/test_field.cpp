#include <doctest.h>

#include <cmath>
#include <bit>

#include "oracles.hpp"
#include "pslab/field.hpp"
#include "pslab/rng.hpp"

using namespace pslab;

namespace {

FieldSpec pat(std::vector<Point> g, std::int64_t n, double lambda = 1.0, int d = 1) {
    return FieldSpec::pattern(d, n, lambda, std::move(g));
}

}  // namespace

TEST_CASE("degenerate q = 1 yields the all-ones field") {
    const FieldSpec spec = pat({{0}}, 1);
    CHECK(spec.site_prob() == 1.0);
    const FieldSample s = sample_field(spec, LatticeWindow({0}, {9}), 1234);
    for (auto v : s.y) CHECK(v == 1);
    for (auto v : s.x) CHECK(v == 1);
}

TEST_CASE("pattern x is the product of y over the translate") {
    const FieldSpec spec = pat({{0}, {1}}, 16);
    const LatticeWindow window({0}, {31});
    const FieldSample s = sample_field(spec, window, 98765);
    CHECK(s.x_consistent());
    for (Coord k = 0; k <= 31; ++k) {
        const auto yk = s.y[static_cast<std::size_t>(s.padded.flat_index({k}))];
        const auto yk1 = s.y[static_cast<std::size_t>(s.padded.flat_index({k + 1}))];
        CHECK(s.x_at({k}) == (yk & yk1));
    }
}

TEST_CASE("or-field x is the pairwise or and stays consistent") {
    const FieldSpec spec = FieldSpec::or_field(4, 1.0);
    const FieldSample s = sample_field(spec, LatticeWindow({-3}, {12}), 5);
    CHECK(s.x_consistent());
    for (Coord k = -3; k <= 12; ++k) {
        const auto yk = s.y[static_cast<std::size_t>(s.padded.flat_index({k}))];
        const auto yk1 = s.y[static_cast<std::size_t>(s.padded.flat_index({k + 1}))];
        CHECK(s.x_at({k}) == (yk | yk1));
    }
}

TEST_CASE("sampling is reproducible and seed-sensitive") {
    const FieldSpec spec = pat({{0}, {2}}, 16);
    const LatticeWindow window({0}, {63});
    const FieldSample a = sample_field(spec, window, 7);
    const FieldSample b = sample_field(spec, window, 7);
    const FieldSample c = sample_field(spec, window, 8);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.y != c.y);
}

TEST_CASE("or-field site mean matches the four-outcome enumeration") {
    // p = 1 - (1 - 1/4)^2 = 7/16
    const FieldSpec spec = FieldSpec::or_field(4, 1.0);
    const LatticeWindow window({0}, {9});
    const std::int64_t reps = 1000000;
    std::int64_t hits = 0;
    for (std::int64_t r = 0; r < reps; ++r) {
        const FieldSample s = sample_field(spec, window, derive_stream_seed(20240601, static_cast<std::uint64_t>(r)));
        hits += s.x_at({0});
    }
    const double p = 7.0 / 16.0;
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(reps));
    CHECK(std::abs(static_cast<double>(hits) / static_cast<double>(reps) - p) < 3 * se);
}

TEST_CASE("marginal probabilities") {
    CHECK(pat({{0}}, 10).marginal_prob() == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(pat({{0}, {1}}, 16).marginal_prob() == doctest::Approx(1.0 / 16).epsilon(1e-13));
    CHECK(pat({{0, 0}, {1, 1}}, 9, 1.0, 2).marginal_prob() == doctest::Approx(1.0 / 81).epsilon(1e-13));
    CHECK(FieldSpec::or_field(4, 1.0).marginal_prob() == doctest::Approx(7.0 / 16).epsilon(1e-15));

    SUBCASE("pattern marginal is exactly lambda/n^d") {
        for (std::int64_t n : {2, 4, 16, 25}) {
            const FieldSpec s = pat({{0}, {1}, {3}}, n);
            CHECK(s.marginal_prob() ==
                  doctest::Approx(1.0 / static_cast<double>(n)).epsilon(1e-12));
        }
    }
    SUBCASE("matches the enumeration oracle") {
        CHECK(pat({{0}, {1}}, 16).marginal_prob() ==
              doctest::Approx(oracle::marginal(pat({{0}, {1}}, 16))).epsilon(1e-13));
        CHECK(FieldSpec::or_field(5, 2.0).marginal_prob() ==
              doctest::Approx(oracle::marginal(FieldSpec::or_field(5, 2.0))).epsilon(1e-13));
    }
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(pat({{0}}, 1, 2.0), invalid_spec_error);     // q = 2
    CHECK_THROWS_AS(FieldSpec::or_field(1, 2.0), invalid_spec_error);
    CHECK_THROWS_AS(pat({}, 4), invalid_spec_error);             // empty G
    CHECK_THROWS_AS(pat({{0}, {0}}, 4), invalid_spec_error);     // duplicate
    CHECK_THROWS_AS(pat({{0, 1}}, 4), invalid_spec_error);       // wrong dim
    CHECK_THROWS_AS(FieldSpec::pattern(0, 4, 1.0, {{0}}), invalid_spec_error);
    CHECK_THROWS_AS(pat({{0}}, 0), invalid_spec_error);
    CHECK_THROWS_AS(pat({{0}}, 4, -1.0), invalid_spec_error);
}

TEST_CASE("oversized windows hit the resource budget") {
    CHECK_THROWS_AS(LatticeWindow({0}, {kMaxWindowSites + 5}), resource_error);
    CHECK_THROWS_AS(LatticeWindow({0, 0}, {1 << 14, 1 << 14}), resource_error);
}

TEST_CASE("union_size") {
    CHECK(union_size({{0}, {1}}, {1}) == 3);
    CHECK(union_size({{0}}, {5}) == 2);
    CHECK_THROWS_AS(union_size({{0}, {1}}, {0}), std::domain_error);

    SUBCASE("exhaustive: every nonzero translate adds a point") {
        // all G in [0,4]^d with |G| <= 4, d in {1,2}
        for (int d : {1, 2}) {
            std::vector<Point> universe;
            if (d == 1)
                for (Coord i = 0; i <= 4; ++i) universe.push_back({i});
            else
                for (Coord i = 0; i <= 4; ++i)
                    for (Coord j = 0; j <= 4; ++j) universe.push_back({i, j});
            const auto u = universe.size();
            for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << u); ++mask) {
                if (std::popcount(mask) > 4) continue;
                std::vector<Point> g;
                for (std::size_t i = 0; i < u; ++i)
                    if (mask >> i & 1) g.push_back(universe[i]);
                // lags where dependence is possible
                for (const Point& g1 : g)
                    for (const Point& g2 : g) {
                        Point lag(static_cast<std::size_t>(d));
                        for (int i = 0; i < d; ++i) lag[i] = g1[i] - g2[i];
                        if (lag == Point(static_cast<std::size_t>(d), 0)) continue;
                        CHECK(union_size(g, lag) >= static_cast<std::int64_t>(g.size()) + 1);
                    }
            }
        }
    }
}

TEST_CASE("exact covariance matches the enumeration oracle") {
    SUBCASE("fixed values") {
        CHECK(exact_cov(pat({{0}, {1}}, 16), {1}) == doctest::Approx(0.01171875).epsilon(1e-12));
        CHECK(exact_cov(pat({{0}}, 16), {1}) == 0.0);
        CHECK(exact_cov(pat({{0}}, 16), {-3}) == 0.0);
        CHECK(exact_cov(FieldSpec::or_field(4, 1.0), {1}) ==
              doctest::Approx(27.0 / 256).epsilon(1e-14));
        CHECK(exact_cov(FieldSpec::or_field(4, 1.0), {2}) == 0.0);
        CHECK_THROWS_AS(exact_cov(pat({{0}}, 4), {0}), std::domain_error);
    }
    SUBCASE("oracle grid, both kinds, all lags in and around the lag set") {
        std::vector<FieldSpec> specs;
        for (std::int64_t n : {2, 4, 16}) {
            specs.push_back(pat({{0}, {1}}, n));
            specs.push_back(pat({{0}, {2}}, n));
            specs.push_back(pat({{0}, {1}, {3}}, n));
            specs.push_back(FieldSpec::or_field(n, 1.0));
        }
        specs.push_back(pat({{0, 0}, {1, 1}}, 9, 1.0, 2));
        for (const FieldSpec& spec : specs) {
            for (const Point& lag : spec.lag_set()) {
                const double got = exact_cov(spec, lag);
                CHECK(got >= 0.0);
                CHECK(got == doctest::Approx(oracle::covariance(spec, lag)).epsilon(1e-12).scale(1));
            }
            // a few lags outside the lag set must vanish, also per the oracle
            if (spec.dim() == 1) {
                for (Coord far : {5, -7}) {
                    CHECK(exact_cov(spec, {far}) == 0.0);
                    CHECK(oracle::covariance(spec, {far}) ==
                          doctest::Approx(0.0).epsilon(1e-12).scale(1));
                }
            }
        }
    }
}

TEST_CASE("sigma sums the lag set") {
    CHECK(sigma(pat({{0}, {1}}, 16)) == doctest::Approx(0.0234375).epsilon(1e-12));
    CHECK(sigma(pat({{0}}, 100)) == 0.0);
    CHECK(sigma(FieldSpec::or_field(4, 1.0)) == doctest::Approx(27.0 / 128).epsilon(1e-14));

    // against the oracle, summed over the lag set
    const FieldSpec spec = pat({{0}, {1}, {3}}, 16);
    double total = 0.0;
    for (const Point& lag : spec.lag_set()) total += oracle::covariance(spec, lag);
    CHECK(sigma(spec) == doctest::Approx(total).epsilon(1e-12).scale(1));
}

TEST_CASE("decay diagnostic closed forms") {
    SUBCASE("pattern {0,1}: n sigma(n) = 2 n^-1/2 (1 - n^-1/2), to zero") {
        const auto rows = decay_diagnostic(pat({{0}, {1}}, 4), {4, 16, 64, 256});
        double prev = 1e9;
        for (const DecayRow& row : rows) {
            const double rn = std::pow(static_cast<double>(row.n), -0.5);
            CHECK(row.nd_sigma == doctest::Approx(2 * rn * (1 - rn)).epsilon(1e-12).scale(1));
            CHECK(row.nd_sigma < prev);
            prev = row.nd_sigma;
        }
    }
    SUBCASE("independent pattern: identically zero") {
        for (const DecayRow& row : decay_diagnostic(pat({{0}}, 10), {10, 100}))
            CHECK(row.nd_sigma == 0.0);
    }
    SUBCASE("or-field: n sigma(n) = 2 (1 - 1/n)^3, to two") {
        const auto rows = decay_diagnostic(FieldSpec::or_field(4, 1.0), {4, 16, 64, 256});
        double prev = 0.0;
        for (const DecayRow& row : rows) {
            const double v = 1.0 - 1.0 / static_cast<double>(row.n);
            CHECK(row.nd_sigma == doctest::Approx(2 * v * v * v).epsilon(1e-12).scale(1));
            CHECK(row.nd_sigma > prev);
            prev = row.nd_sigma;
        }
    }
}

TEST_CASE("two-dimensional pattern sampling") {
    const FieldSpec spec = FieldSpec::pattern(2, 9, 1.0, {{0, 0}, {1, 1}});
    const LatticeWindow window({-2, 3}, {7, 12});
    const FieldSample s = sample_field(spec, window, 4242);
    CHECK(s.x_consistent());
    CHECK(s.padded.lo() == Point{-2, 3});
    CHECK(s.padded.hi() == Point{8, 13});
    for (Coord i = -2; i <= 7; ++i)
        for (Coord j = 3; j <= 12; ++j) {
            const auto y00 = s.y[static_cast<std::size_t>(s.padded.flat_index({i, j}))];
            const auto y11 = s.y[static_cast<std::size_t>(s.padded.flat_index({i + 1, j + 1}))];
            CHECK(s.x_at({i, j}) == (y00 & y11));
        }
}

TEST_CASE("monte carlo marginal agrees with the closed form") {
    const FieldSpec spec = pat({{0}, {1}}, 16);
    const LatticeWindow window({0}, {0});
    const std::int64_t reps = 200000;
    std::int64_t hits = 0;
    for (std::int64_t r = 0; r < reps; ++r)
        hits += sample_field(spec, window, derive_stream_seed(77, static_cast<std::uint64_t>(r))).x_at({0});
    const double p = spec.marginal_prob();
    const double budget = 4 * std::sqrt(p * (1 - p) / static_cast<double>(reps));
    CHECK(std::abs(static_cast<double>(hits) / static_cast<double>(reps) - p) < budget);
}
