#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "pslab/measure.hpp"
#include "pslab/rng.hpp"

using namespace pslab;

namespace {

TestFunction trap1(double amplitude = 1.0) {
    return TestFunction({{0.0, 0.25, 0.75, 1.0}}, amplitude);
}

}  // namespace

TEST_CASE("trapezoid validation") {
    CHECK_THROWS_AS(TestFunction({{0.0, 0.0, 1.0, 1.0}}, 1.0), precondition_error);  // 0-width rise
    CHECK_THROWS_AS(TestFunction({{0.0, 0.5, 1.0, 1.0}}, 1.0), precondition_error);  // 0-width fall
    CHECK_THROWS_AS(TestFunction({{0.0, 0.6, 0.5, 1.0}}, 1.0), precondition_error);  // b > c
    CHECK_THROWS_AS(TestFunction({{0.0, 0.5, 0.5, 1.0}}, -1.0), precondition_error);
    CHECK_NOTHROW(TestFunction({{0.0, 0.5, 0.5, 1.0}}, 0.0));  // triangle, zero amplitude
}

TEST_CASE("trapezoid evaluation and sup norm") {
    const TestFunction f = trap1(2.0);
    CHECK(f.sup_norm() == 2.0);
    const double xs[] = {0.0, 0.125, 0.25, 0.5, 0.75, 0.875, 1.0, 2.0, -1.0};
    const double want[] = {0.0, 1.0, 2.0, 2.0, 2.0, 1.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < 9; ++i) {
        const double x = xs[i];
        CHECK(f(std::span<const double>(&x, 1)) == doctest::Approx(want[i]).epsilon(1e-15));
    }
    // triangle attains the amplitude at its apex
    const TestFunction tri({{0.0, 0.5, 0.5, 1.0}}, 3.0);
    const double apex = 0.5;
    CHECK(tri(std::span<const double>(&apex, 1)) == 3.0);

    const TestFunction f2({{0.0, 0.25, 0.75, 1.0}, {0.0, 0.5, 0.5, 1.0}}, 1.0);
    const double pt[] = {0.5, 0.25};
    CHECK(f2(pt) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("lattice support") {
    const auto pts = lattice_support(trap1(), 10);
    REQUIRE(pts.size() == 11);
    CHECK(pts.front() == Point{0});
    CHECK(pts.back() == Point{10});

    const TestFunction f2({{0.0, 0.25, 0.75, 1.0}, {0.0, 0.25, 0.75, 1.0}}, 1.0);
    CHECK(lattice_support(f2, 3).size() == 16);

    const TestFunction inner({{0.25, 0.4, 0.6, 0.75}}, 1.0);
    const auto pts8 = lattice_support(inner, 8);
    REQUIRE(pts8.size() == 5);
    CHECK(pts8.front() == Point{2});
    CHECK(pts8.back() == Point{6});

    SUBCASE("cardinality bound K n^d") {
        for (double shift : {0.0, 0.3, -1.7}) {
            const TestFunction f({{shift, shift + 0.2, shift + 0.9, shift + 1.3}}, 1.0);
            const double K = (shift + 1.3) - shift + 1.0;
            for (std::int64_t n : {1, 2, 3, 5, 8, 13, 50}) {
                const auto count = static_cast<double>(lattice_support(f, n).size());
                CHECK(count <= K * static_cast<double>(n));
            }
        }
        const TestFunction f2({{0.0, 0.25, 0.75, 1.0}, {-0.5, 0.0, 0.2, 0.5}}, 1.0);
        for (std::int64_t n : {1, 2, 7, 20}) {
            const auto count = static_cast<double>(lattice_support(f2, n).size());
            CHECK(count <= 2.0 * 2.0 * static_cast<double>(n * n));
        }
    }
}

TEST_CASE("measure of a box counts boundary-inclusively") {
    // q = 1 field: all ones
    const FieldSpec ones = FieldSpec::pattern(1, 10, 10.0, {{0}});
    REQUIRE(ones.site_prob() == 1.0);
    const FieldSample s = sample_field(ones, LatticeWindow({-2}, {12}), 3);
    CHECK(measure_of_box(s, BoxRegion({0.0}, {1.0})) == 11);
    CHECK(measure_of_box(s, BoxRegion({0.05}, {0.95})) == 9);  // sites 1..9

    // effectively-zero field: fixed seed, all sites empty
    const FieldSpec zeros = FieldSpec::pattern(1, 10, 1e-12, {{0}});
    const FieldSample z = sample_field(zeros, LatticeWindow({0}, {10}), 99);
    CHECK(measure_of_box(z, BoxRegion({0.0}, {1.0})) == 0);

    SUBCASE("coverage is a hard precondition") {
        CHECK_THROWS_AS(measure_of_box(z, BoxRegion({0.0}, {2.0})), precondition_error);
    }
}

TEST_CASE("mean box count matches the marginal sum") {
    // 101 sites, each Bernoulli(1/100)
    const FieldSpec spec = FieldSpec::pattern(1, 100, 1.0, {{0}});
    const BoxRegion box({0.0}, {1.0});
    const LatticeWindow window({0}, {100});
    const std::int64_t reps = 100000;
    double total = 0.0;
    for (std::int64_t r = 0; r < reps; ++r) {
        const FieldSample s = sample_field(spec, window, derive_stream_seed(123, static_cast<std::uint64_t>(r)));
        total += static_cast<double>(measure_of_box(s, box));
    }
    const double mean = total / static_cast<double>(reps);
    const double var_one = 101 * 0.01 * 0.99;
    const double se = std::sqrt(var_one / static_cast<double>(reps));
    CHECK(std::abs(mean - 1.01) < 3 * se);
}

TEST_CASE("integral against a sample") {
    const FieldSpec ones = FieldSpec::pattern(1, 10, 10.0, {{0}});
    const FieldSample s = sample_field(ones, LatticeWindow({0}, {10}), 3);

    SUBCASE("zero amplitude gives zero") {
        CHECK(integral_against(trap1(0.0), s) == 0.0);
    }
    SUBCASE("all-ones sample gives the Riemann sum") {
        const TestFunction f = trap1();
        double want = 0.0;
        for (Coord j = 0; j <= 10; ++j) {
            const double x = static_cast<double>(j) / 10.0;
            want += f(std::span<const double>(&x, 1));
        }
        CHECK(integral_against(f, s) == doctest::Approx(want).epsilon(1e-15));
    }
    SUBCASE("linear in the amplitude, exactly") {
        const FieldSpec spec = FieldSpec::pattern(1, 10, 1.0, {{0}, {1}});
        const FieldSample r = sample_field(spec, LatticeWindow({0}, {10}), 17);
        CHECK(integral_against(trap1(2.0), r) == 2.0 * integral_against(trap1(1.0), r));
    }
    SUBCASE("bounded by sup-norm times box count") {
        const FieldSpec spec = FieldSpec::or_field(10, 1.0);
        const FieldSample r = sample_field(spec, LatticeWindow({0}, {10}), 29);
        const double v = integral_against(trap1(), r);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 * static_cast<double>(measure_of_box(r, BoxRegion({0.0}, {1.0}))));
    }
    SUBCASE("re-derivable from the raw sample data") {
        const FieldSpec spec = FieldSpec::or_field(10, 1.0);
        const FieldSample r = sample_field(spec, LatticeWindow({0}, {10}), 29);
        const TestFunction f = trap1();
        double manual = 0.0;
        for (const Point& j : lattice_support(f, 10)) {
            const double x = static_cast<double>(j[0]) / 10.0;
            manual += f(std::span<const double>(&x, 1)) * static_cast<double>(r.x_at(j));
        }
        CHECK(integral_against(f, r) == manual);  // identical summation order
    }
}

TEST_CASE("charfn integral (quadrature)") {
    SUBCASE("trivial zeros are exact") {
        CHECK(charfn_integral(trap1(), 0.0, 1.0) == std::complex<double>(0.0, 0.0));
        CHECK(charfn_integral(trap1(0.0), 3.0, 1.0) == std::complex<double>(0.0, 0.0));
    }
    SUBCASE("matches the closed-form segment oracle") {
        const TestFunction f({{0.0, 0.1, 0.9, 1.0}}, 1.0);
        for (double t : {0.5, 1.0, 2.0, 3.14159265358979}) {
            for (double scale : {1.0, 2.0}) {
                const auto got = charfn_integral(f, t, scale);
                const auto want = oracle::charfn_integral_1d(f, t, scale);
                CHECK(std::abs(got - want) < 1e-8);
            }
        }
        const TestFunction g({{-0.5, 0.25, 0.25, 2.0}}, 0.7);  // triangle
        const auto got = charfn_integral(g, 2.0, 1.0);
        CHECK(std::abs(got - oracle::charfn_integral_1d(g, 2.0, 1.0)) < 1e-8);
    }
    SUBCASE("conjugate symmetry and bounds") {
        const TestFunction f = trap1(1.5);
        for (double t : {0.5, 2.0}) {
            const auto plus = charfn_integral(f, t, 1.0);
            const auto minus = charfn_integral(f, -t, 1.0);
            CHECK(std::abs(plus - std::conj(minus)) < 1e-12);
            CHECK(plus.real() <= 1e-12);                       // Re(e^i theta - 1) <= 0
            CHECK(std::abs(plus) <= 2.0 * f.support().volume() + 1e-12);
        }
    }
    SUBCASE("two-dimensional tensor grid against a brute-force estimate") {
        const TestFunction f({{0.0, 0.25, 0.75, 1.0}, {0.0, 0.5, 0.5, 1.0}}, 1.0);
        const auto got = charfn_integral(f, 1.5, 1.0);
        // crude midpoint grid, independent of the Simpson machinery
        const int grid = 800;
        std::complex<double> want{0.0, 0.0};
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                const double pt[] = {(i + 0.5) / grid, (j + 0.5) / grid};
                const double theta = 1.5 * f(pt);
                want += std::complex<double>(std::cos(theta) - 1.0, std::sin(theta));
            }
        want /= static_cast<double>(grid) * static_cast<double>(grid);
        CHECK(std::abs(got - want) < 1e-5);
    }
    SUBCASE("hopeless oscillation hits the panel cap") {
        CHECK_THROWS_AS(charfn_integral(trap1(), 1e14, 1.0), accuracy_error);
        try {
            charfn_integral(trap1(), 1e14, 1.0);
        } catch (const accuracy_error& e) {
            CHECK(std::isfinite(e.last.real()));
            CHECK(std::isfinite(e.previous.real()));
        }
    }
}
