#pragma once

#include <cstdint>

namespace arnca {

/// Counter-based splitmix64 stream. Identical seeds produce identical
/// byte streams on every platform, which is the basis of every
/// reproducibility contract in this project.
class RngStream {
public:
    explicit RngStream(uint64_t seed = 0) : state_(seed) {}

    /// Derive an independent stream for worker k of a master-seeded run.
    static RngStream derive(uint64_t master_seed, uint64_t k) {
        uint64_t s = master_seed ^ k;
        return RngStream(mix(s + 0x9E3779B97F4A7C15ull));
    }

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). Rejection-free modulo is fine here:
    /// bounds are tiny (grid sides, chunk counts) so bias is negligible,
    /// and the draw count per event stays fixed at one.
    uint64_t next_below(uint64_t bound) {
        return next_u64() % bound;
    }

    bool bernoulli(double p) {
        return next_uniform() < p;
    }

    double uniform_in(double lo, double hi) {
        return lo + (hi - lo) * next_uniform();
    }

    uint64_t state() const { return state_; }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    uint64_t state_;
};

} // namespace arnca
