#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace areaflow {

// splitmix64; used to turn (base seed, stream index) pairs into well-mixed
// generator seeds so sub-streams (per walk, per period, per phase) stay
// decorrelated and reproducible.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(splitmix64(base) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

// mt19937_64 with hand-rolled draw helpers. The standard fixes the engine's
// output sequence but not the distributions', so we implement the few draws
// we need to keep results identical across compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n), unbiased
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % n;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // geometric on {1, 2, ...} with the given mean (inversion method)
    std::uint64_t geometric_at_least_one(double mean) {
        if (mean <= 1.0) return 1;
        const double p = 1.0 / mean;
        const double u = uniform01();
        const double k = std::floor(std::log1p(-u) / std::log1p(-p));
        return 1 + static_cast<std::uint64_t>(k);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace areaflow
