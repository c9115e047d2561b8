// Copyright (c) 2026, the fedvox authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace fedvox {

// splitmix64 output mixer (Vigna). Also used to derive substream seeds.
inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

// SplitMix64: the project-wide generator. 64-bit state, additive Weyl
// sequence with an avalanching mixer. Bit-reproducible on every platform,
// which is what the determinism contracts lean on. Distributions below
// (uniform doubles, Box-Muller gaussians, bounded ints) are implemented
// here rather than taken from <random> because libstdc++/libc++ do not
// guarantee identical distribution output.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) via rejection.
    uint64_t below(uint64_t n) {
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Standard normal via Box-Muller; consumes two uniforms per pair.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Fisher-Yates shuffle, back to front.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derives an independent substream seed from (seed, lane). Lanes are
// documented at each call site; the scheme is fixed so artifacts are
// reproducible across runs and generation order.
inline uint64_t substream(uint64_t seed, uint64_t lane) {
    return mix64(seed + 0x9e3779b97f4a7c15ull * (lane + 1));
}

inline uint64_t substream(uint64_t seed, uint64_t lane, uint64_t sublane) {
    return substream(substream(seed, lane), sublane);
}

}  // namespace fedvox
