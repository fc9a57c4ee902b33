#ifndef MIXDIAG_RNG_HPP
#define MIXDIAG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mixdiag {

/// Counter-based deterministic random stream. Each draw hashes
/// (key, counter) with the splitmix64 finalizer, so a stream is a pure
/// function of (seed, stream, counter) — no hidden global state, and
/// independent streams can be handed to parallel tasks. Gaussians come
/// from Box-Muller with the second variate cached; output files depend
/// on this choice, so it is fixed.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ 0x9E3779B97F4A7C15ULL, stream)) {}

    std::uint64_t next_u64() { return mix(key_, counter_++); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal variate (Box-Muller).
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    static std::uint64_t mix(std::uint64_t key, std::uint64_t n) {
        std::uint64_t z = key + n * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace mixdiag

#endif
