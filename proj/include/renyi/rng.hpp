// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace renyi {

namespace detail {

// SplitMix64 output function (Steele, Lea, Flood 2014). Used as a pure
// counter-based generator: sample k of stream s is mix(s + k*GAMMA).
constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

}  // namespace detail

// Counter-based deterministic sampler. Identical (seed, counter) pairs yield
// identical samples on every platform; forking derives an independent stream.
class SeededSampler {
  public:
    explicit SeededSampler(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64() {
        return detail::splitmix64(seed_ + (++counter_) * detail::kSplitMixGamma);
    }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; draws exactly two uniforms per call pair.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::complex<double> complex_gauss() {
        double re = gauss();
        double im = gauss();
        return {re, im};
    }

    // Deterministic child stream; children with distinct branch indices are
    // independent of each other and of the parent.
    SeededSampler fork(std::uint64_t branch) const {
        return SeededSampler(detail::splitmix64(seed_ ^ detail::splitmix64((branch + 1) * detail::kSplitMixGamma)));
    }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace renyi
