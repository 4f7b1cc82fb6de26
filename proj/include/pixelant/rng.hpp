// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_RNG_HPP
#define PIXELANT_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace pixelant {

// All randomness in the library flows from explicit 64-bit seeds. Substreams
// are derived with derive_seed(master, {tag, index, ...}) so that parallel
// generation is reproducible regardless of scheduling. The raw engine is
// std::mt19937_64, whose output sequence is fixed by the standard; the
// distributions below are hand-rolled so results do not depend on the
// standard library's (unspecified) distribution algorithms.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Folds the words into the master seed one splitmix64 round at a time.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t w : words) h = splitmix64(h ^ splitmix64(w));
    return h;
}

// Stream tags keeping unrelated substreams of one master seed apart.
namespace seed_tag {
inline constexpr std::uint64_t antenna = 0xA57E77A1ULL;
inline constexpr std::uint64_t taps = 0x7A950001ULL;
inline constexpr std::uint64_t training = 0x7281A15EULL;
inline constexpr std::uint64_t lloyd_init = 0x110D1817ULL;
inline constexpr std::uint64_t lloyd_cell = 0x110DCE11ULL;
inline constexpr std::uint64_t eval_channel = 0xE7A1C4A7ULL;
inline constexpr std::uint64_t sebo_run = 0x5EB0284ULL;
inline constexpr std::uint64_t random_coder = 0x2A7DC0DEULL;
}  // namespace seed_tag

class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Marsaglia polar method; one spare kept between calls.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    std::complex<double> complex_normal(double stddev_per_component) {
        const double re = normal() * stddev_per_component;
        const double im = normal() * stddev_per_component;
        return {re, im};
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

   private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace pixelant

#endif
