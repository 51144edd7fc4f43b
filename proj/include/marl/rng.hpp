#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "marl/error.hpp"

namespace marl {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a root seed and a stream index. Counter-based,
/// so adding streams never perturbs existing ones.
inline uint64_t derive_seed(uint64_t root, uint64_t stream) {
    return splitmix64(root ^ splitmix64(stream + 1));
}

/// Deterministic RNG. All sampling goes through hand-rolled transforms so the
/// same seed yields the same stream on every platform (the standard library
/// distributions are implementation-defined).
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    int next_int(int n) {
        return static_cast<int>(next_double() * n);
    }

    /// Samples an index from an unnormalized nonnegative weight vector.
    int categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total <= 0.0)
            throw Error(ErrorKind::numeric, "categorical: nonpositive total weight");
        double u = next_double() * total;
        double acc = 0.0;
        for (size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

    /// Standard normal via Box-Muller (deterministic across platforms).
    double normal() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace marl
