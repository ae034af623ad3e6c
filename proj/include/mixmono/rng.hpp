#pragma once

#include <cstdint>

namespace mixmono {

/// Deterministic pseudo-random source (splitmix64). Standard-library
/// distributions are implementation-defined, so every randomized component
/// in the library draws from this generator to keep reports reproducible
/// byte-for-byte across platforms.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n). n must be positive. Modulo bias is below
    /// 2^-32 for the table sizes used here and is accepted in exchange for
    /// platform-independent determinism.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

    bool coin() { return (next() & 1u) != 0; }

    /// Independent child stream; used to give each trial its own generator
    /// so that adding trials never perturbs earlier ones.
    static DetRng child(std::uint64_t seed, std::uint64_t stream) {
        DetRng mixer(seed ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
        return DetRng(mixer.next());
    }

private:
    std::uint64_t state_;
};

}  // namespace mixmono
