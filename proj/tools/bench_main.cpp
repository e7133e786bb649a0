// Timing comparison of the OpenMP kernels against their serial reference
// implementations. The two must agree bit-for-bit (the test suite enforces
// that); this target reports the speedup.

#include <chrono>
#include <cstdio>
#include <string>

#include "pslab/charfn.hpp"
#include "pslab/counts.hpp"
#include "pslab/parallel.hpp"

using namespace pslab;

namespace {

template <class Fn>
double time_ms(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    double scale = 1.0;
    if (argc > 1) scale = std::stod(argv[1]);
    std::printf("threads: %d, work scale: %.2f\n", max_threads(), scale);

    const TestFunction f({{0.0, 0.25, 0.75, 1.0}}, 1.0);

    {
        const FieldSpec spec = FieldSpec::pattern(1, 160, 1.0, {{0}, {1}});
        const auto replicates = static_cast<std::int64_t>(200000 * scale);
        McEstimate a, b;
        const double ts = time_ms([&] { a = reference::mc_charfn(1.0, f, spec, replicates, 42); });
        const double tp = time_ms([&] { b = mc_charfn(1.0, f, spec, replicates, 42); });
        report("mc_charfn (n=160)", ts, tp);
        if (a.value != b.value || a.se != b.se) std::printf("  MISMATCH!\n");
    }
    {
        const FieldSpec spec = FieldSpec::pattern(1, 200, 1.0, {{0}, {1}});
        const BoxRegion box({0.0}, {1.0});
        const auto replicates = static_cast<std::int64_t>(100000 * scale);
        CountHistogram a, b;
        const double ts =
            time_ms([&] { a = reference::count_experiment(spec, box, replicates, 42); });
        const double tp = time_ms([&] { b = count_experiment(spec, box, replicates, 42); });
        report("count_experiment (n=200)", ts, tp);
        if (a.counts != b.counts) std::printf("  MISMATCH!\n");
    }
    {
        // 22 padded Y sites -> 2^22 configurations
        const FieldSpec spec = FieldSpec::pattern(1, 20, 1.0, {{0}, {1}});
        std::complex<double> a, b;
        const double ts = time_ms([&] { a = reference::exact_charfn(1.0, f, spec); });
        const double tp = time_ms([&] { b = exact_charfn(1.0, f, spec); });
        report("exact_charfn (2^21 cfgs)", ts, tp);
        if (a != b) std::printf("  MISMATCH!\n");
    }
    return 0;
}
