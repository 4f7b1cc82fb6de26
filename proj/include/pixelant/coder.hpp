// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_CODER_HPP
#define PIXELANT_CODER_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pixelant/errors.hpp"

namespace pixelant {

// Binary configuration of the Q pixel switches. Bit q refers to parasitic
// port q; 0 means the switch is closed (short circuit), 1 means it is open.
class AntennaCoder {
   public:
    AntennaCoder() = default;
    explicit AntennaCoder(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (auto b : bits_)
            if (b > 1) throw InvalidConfig("coder bits must be 0 or 1");
    }

    static AntennaCoder zeros(std::size_t q) { return AntennaCoder(std::vector<std::uint8_t>(q, 0)); }
    static AntennaCoder ones(std::size_t q) { return AntennaCoder(std::vector<std::uint8_t>(q, 1)); }

    // Little-endian: bit q of the index drives switch q.
    static AntennaCoder from_index(std::uint64_t index, std::size_t q) {
        if (q < 64 && index >> q) throw InvalidConfig("coder index out of range");
        std::vector<std::uint8_t> bits(q, 0);
        for (std::size_t i = 0; i < q && i < 64; ++i) bits[i] = static_cast<std::uint8_t>((index >> i) & 1u);
        return AntennaCoder(std::move(bits));
    }

    std::uint64_t to_index() const {
        if (bits_.size() > 64) throw TooLarge("coder too long for a 64-bit index");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < bits_.size(); ++i) v |= static_cast<std::uint64_t>(bits_[i]) << i;
        return v;
    }

    std::size_t size() const { return bits_.size(); }
    std::uint8_t bit(std::size_t i) const { return bits_[i]; }
    void set_bit(std::size_t i, std::uint8_t v) {
        if (v > 1) throw InvalidConfig("coder bits must be 0 or 1");
        bits_[i] = v;
    }
    void flip_bit(std::size_t i) { bits_[i] ^= 1u; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    // Bits packed little-endian into 64-bit words (bit q at word q/64, lane q%64).
    std::vector<std::uint64_t> packed() const {
        std::vector<std::uint64_t> words((bits_.size() + 63) / 64, 0);
        for (std::size_t i = 0; i < bits_.size(); ++i)
            words[i / 64] |= static_cast<std::uint64_t>(bits_[i]) << (i % 64);
        return words;
    }

    std::string to_string() const {
        std::string s(bits_.size(), '0');
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) s[i] = '1';
        return s;
    }

    static AntennaCoder from_string(const std::string& s) {
        std::vector<std::uint8_t> bits(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] != '0' && s[i] != '1') throw InvalidConfig("coder string must contain only 0 and 1");
            bits[i] = static_cast<std::uint8_t>(s[i] - '0');
        }
        return AntennaCoder(std::move(bits));
    }

    friend bool operator==(const AntennaCoder& a, const AntennaCoder& b) { return a.bits_ == b.bits_; }
    friend bool operator!=(const AntennaCoder& a, const AntennaCoder& b) { return !(a == b); }

   private:
    std::vector<std::uint8_t> bits_;
};

// Orders coders by their (unbounded-width) little-endian integer value;
// used to break objective ties deterministically.
inline bool coder_index_less(const AntennaCoder& a, const AntennaCoder& b) {
    const auto wa = a.packed();
    const auto wb = b.packed();
    if (wa.size() != wb.size()) return wa.size() < wb.size();
    for (std::size_t i = wa.size(); i-- > 0;) {
        if (wa[i] != wb[i]) return wa[i] < wb[i];
    }
    return false;
}

// FNV-1a over the packed words, for hash-map memoization of objectives.
struct CoderHash {
    std::size_t operator()(const AntennaCoder& c) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint64_t w : c.packed()) {
            for (int byte = 0; byte < 8; ++byte) {
                h ^= (w >> (8 * byte)) & 0xffu;
                h *= 0x100000001b3ULL;
            }
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace pixelant

#endif
