// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "pixelant/coder.hpp"
#include "pixelant/rng.hpp"

using namespace pixelant;

TEST_CASE("coder construction and bit access") {
    AntennaCoder c = AntennaCoder::zeros(5);
    CHECK(c.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(c.bit(i) == 0);

    c.set_bit(2, 1);
    CHECK(c.bit(2) == 1);
    c.flip_bit(2);
    CHECK(c.bit(2) == 0);
    c.flip_bit(0);
    CHECK(c.bit(0) == 1);

    AntennaCoder ones = AntennaCoder::ones(3);
    CHECK(ones.to_string() == "111");

    CHECK(AntennaCoder().size() == 0);

    CHECK_THROWS_AS(AntennaCoder({0, 2, 1}), InvalidConfig);
    CHECK_THROWS_AS(c.set_bit(1, 7), InvalidConfig);
}

TEST_CASE("index round trips are little-endian") {
    // Bit q of the index drives switch q: index 6 = 0b110 -> bits 011.
    AntennaCoder c = AntennaCoder::from_index(6, 3);
    CHECK(c.to_string() == "011");
    CHECK(c.to_index() == 6);

    for (std::uint64_t idx = 0; idx < 32; ++idx) {
        CHECK(AntennaCoder::from_index(idx, 5).to_index() == idx);
    }

    // Width beyond the value keeps high bits at zero.
    AntennaCoder wide = AntennaCoder::from_index(1, 12);
    CHECK(wide.size() == 12);
    CHECK(wide.bit(0) == 1);
    for (std::size_t i = 1; i < 12; ++i) CHECK(wide.bit(i) == 0);

    CHECK_THROWS_AS(AntennaCoder::from_index(8, 3), InvalidConfig);
    CHECK_THROWS_AS(AntennaCoder::from_index(1, 0), InvalidConfig);

    // 64-bit coders accept any index; longer ones cannot be indexed at all.
    CHECK(AntennaCoder::from_index(~std::uint64_t{0}, 64).to_index() == ~std::uint64_t{0});
    CHECK_THROWS_AS(AntennaCoder::zeros(65).to_index(), TooLarge);
}

TEST_CASE("string round trips") {
    AntennaCoder c = AntennaCoder::from_string("0110");
    CHECK(c.size() == 4);
    CHECK(c.bit(0) == 0);
    CHECK(c.bit(1) == 1);
    CHECK(c.bit(2) == 1);
    CHECK(c.bit(3) == 0);
    CHECK(c.to_string() == "0110");
    CHECK(AntennaCoder::from_string("").size() == 0);
    CHECK_THROWS_AS(AntennaCoder::from_string("01x"), InvalidConfig);
}

TEST_CASE("packed words match manual bit packing") {
    // 70 bits: word 0 gets bits 0..63, word 1 gets bits 64..69.
    std::vector<std::uint8_t> bits(70, 0);
    bits[0] = 1;
    bits[63] = 1;
    bits[64] = 1;
    bits[69] = 1;
    AntennaCoder c{bits};
    auto words = c.packed();
    REQUIRE(words.size() == 2);
    CHECK(words[0] == ((std::uint64_t{1} << 63) | 1u));
    CHECK(words[1] == ((std::uint64_t{1} << 5) | 1u));

    CHECK(AntennaCoder::zeros(0).packed().empty());
    CHECK(AntennaCoder::from_index(0x5aa5, 16).packed() ==
          std::vector<std::uint64_t>{0x5aa5});
}

TEST_CASE("coder ordering by little-endian value") {
    const auto a = AntennaCoder::from_index(3, 8);
    const auto b = AntennaCoder::from_index(5, 8);
    CHECK(coder_index_less(a, b));
    CHECK(!coder_index_less(b, a));
    CHECK(!coder_index_less(a, a));

    // Equal index, different declared width within one word: equal values.
    const auto short3 = AntennaCoder::from_index(3, 4);
    CHECK(!coder_index_less(a, short3));
    CHECK(!coder_index_less(short3, a));

    // More words always orders later.
    const auto long_zero = AntennaCoder::zeros(65);
    CHECK(coder_index_less(b, long_zero));
    CHECK(!coder_index_less(long_zero, b));

    // Multi-word comparison is most-significant-word first.
    std::vector<std::uint8_t> lo(65, 0), hi(65, 0);
    lo[0] = 1;   // value 1
    hi[64] = 1;  // value 2^64
    CHECK(coder_index_less(AntennaCoder{lo}, AntennaCoder{hi}));
    CHECK(!coder_index_less(AntennaCoder{hi}, AntennaCoder{lo}));
}

TEST_CASE("coder hash matches an independent fnv-1a evaluation") {
    auto fnv_words = [](const std::vector<std::uint64_t>& words) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint64_t w : words)
            for (int b = 0; b < 8; ++b) {
                h ^= (w >> (8 * b)) & 0xffu;
                h *= 0x100000001b3ULL;
            }
        return h;
    };
    CoderHash hash;
    for (std::uint64_t idx : {std::uint64_t{0}, std::uint64_t{1}, std::uint64_t{0xbeef}}) {
        const auto c = AntennaCoder::from_index(idx, 16);
        CHECK(hash(c) == static_cast<std::size_t>(fnv_words(c.packed())));
    }

    // Distinct 12-bit coders should rarely collide; with 4096 of them and a
    // 64-bit hash any collision at all indicates a broken implementation.
    std::set<std::size_t> seen;
    for (std::uint64_t idx = 0; idx < 4096; ++idx)
        seen.insert(hash(AntennaCoder::from_index(idx, 12)));
    CHECK(seen.size() == 4096);
}

TEST_CASE("seed derivation is order and content sensitive") {
    // Known-answer check of the splitmix64 mixer.
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);

    const std::uint64_t master = 42;
    CHECK(derive_seed(master, {1, 2}) != derive_seed(master, {2, 1}));
    CHECK(derive_seed(master, {1}) != derive_seed(master, {1, 0}));
    CHECK(derive_seed(master, {seed_tag::taps, 0}) != derive_seed(master, {seed_tag::antenna, 0}));
    CHECK(derive_seed(master, {7, 9}) == derive_seed(master, {7, 9}));
    CHECK(derive_seed(master + 1, {7, 9}) != derive_seed(master, {7, 9}));
}

TEST_CASE("rng primitives have the documented ranges and moments") {
    Rng rng(12345);

    SUBCASE("raw engine is standard mt19937_64") {
        std::mt19937_64 reference(12345);
        Rng mine(12345);
        for (int i = 0; i < 100; ++i) CHECK(mine.next_u64() == reference());
    }

    SUBCASE("uniform01 stays in [0,1) with mean near one half") {
        double sum = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const double u = rng.uniform01();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
            sum += u;
        }
        CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
    }

    SUBCASE("normal draws have unit variance") {
        double sum = 0.0, sumsq = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double x = rng.normal();
            sum += x;
            sumsq += x * x;
        }
        CHECK(sum / n == doctest::Approx(0.0).epsilon(0.02));
        CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));
    }

    SUBCASE("complex_normal scales per component") {
        double s = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) s += std::norm(rng.complex_normal(0.5));
        // E|z|^2 = 2 * 0.25.
        CHECK(s / n == doctest::Approx(0.5).epsilon(0.03));
    }

    SUBCASE("bernoulli frequency tracks p") {
        int count = 0;
        for (int i = 0; i < 100000; ++i) count += rng.bernoulli(0.1) ? 1 : 0;
        CHECK(count / 100000.0 == doctest::Approx(0.1).epsilon(0.05));
    }

    SUBCASE("below is bounded and covers all residues") {
        std::set<std::uint64_t> seen;
        for (int i = 0; i < 1000; ++i) {
            const std::uint64_t x = rng.below(7);
            REQUIRE(x < 7);
            seen.insert(x);
        }
        CHECK(seen.size() == 7);
    }

    SUBCASE("identical seeds give identical streams") {
        Rng a(99), b(99);
        for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
    }
}
