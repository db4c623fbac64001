#pragma once

#include <cstdint>
#include <random>

namespace delayq {

/// splitmix64 step; used to derive well-mixed substream seeds from
/// (master seed, replication counter) pairs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// One random stream. Substreams are counter-based: stream (seed, i) is the
/// same no matter which worker thread asks for it, so estimates do not
/// depend on the degree of parallelism.
///
/// Variates are produced by inverse CDF from explicit 53-bit uniforms rather
/// than std:: distribution objects, whose output is implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(mix(seed, 0)) {}
    RngStream(std::uint64_t master_seed, std::uint64_t substream)
        : engine_(mix(master_seed, substream)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe to feed into log().
    double uniform01_open_below() { return 1.0 - uniform01(); }

    double exponential(double rate) { return -std::log(uniform01_open_below()) / rate; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Categorical draw over `weights` (must sum to ~1); returns the index.
    template <typename Vec>
    std::size_t categorical(const Vec& weights) {
        double u = uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t substream) {
        std::uint64_t s = seed + 0x632be59bd9b4e019ULL * (substream + 1);
        return splitmix64(s);
    }

    std::mt19937_64 engine_;
};

}  // namespace delayq
