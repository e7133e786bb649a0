#pragma once

#include <cstdint>

namespace pslab {

// Splittable 64-bit generator (SplitMix64, Steele/Lea/Flood; Vigna's constants).
// One instance per replicate stream. Cheap to construct, no warm-up needed.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Bernoulli(q). q = 1 always yields true because next_unit() < 1.
    bool next_bernoulli(double q) { return next_unit() < q; }

  private:
    std::uint64_t state_;
};

// Deterministic per-stream seed for (master, stream). Replicate r always uses
// stream r, so serial and parallel runs draw identical values regardless of
// scheduling. The golden-ratio step places streams on distinct SplitMix64
// trajectories; the finalizer decorrelates neighboring streams.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace pslab
