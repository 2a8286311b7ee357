#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "widthforge/common.hpp"

namespace widthforge {

// Fixed-size bit vector used for truth tables and model sets.
// Row order convention (used project-wide): in a table over variables
// v_1 < v_2 < ... < v_m (ascending id), the variable with the smallest id
// is the most significant bit of the row index.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::uint64_t nbits, bool value = false)
        : nbits_(nbits), words_((nbits + 63) / 64, value ? ~std::uint64_t(0) : 0) {
        trim();
    }

    std::uint64_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    bool get(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(std::uint64_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void clear(std::uint64_t i) { words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    void assign(std::uint64_t i, bool v) { v ? set(i) : clear(i); }

    std::uint64_t count() const {
        std::uint64_t c = 0;
        for (auto w : words_) c += std::uint64_t(__builtin_popcountll(w));
        return c;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    bool operator==(const Bitset &o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }
    bool operator!=(const Bitset &o) const { return !(*this == o); }

    Bitset &operator|=(const Bitset &o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bitset &operator&=(const Bitset &o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    // First set bit, or size() if none.
    std::uint64_t find_first() const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i]) return i * 64 + std::uint64_t(__builtin_ctzll(words_[i]));
        return nbits_;
    }

    std::uint64_t find_next(std::uint64_t from) const {
        ++from;
        if (from >= nbits_) return nbits_;
        size_t wi = from >> 6;
        std::uint64_t w = words_[wi] & (~std::uint64_t(0) << (from & 63));
        while (true) {
            if (w) return wi * 64 + std::uint64_t(__builtin_ctzll(w));
            if (++wi >= words_.size()) return nbits_;
            w = words_[wi];
        }
    }

    const std::vector<std::uint64_t> &words() const { return words_; }
    std::vector<std::uint64_t> &words() { return words_; }

    // Hex serialization, one nibble per 4 rows, lowest row in the least
    // significant bit of the first nibble.
    std::string to_hex() const {
        static const char digits[] = "0123456789abcdef";
        std::uint64_t nibbles = (nbits_ + 3) / 4;
        std::string out;
        out.reserve(nibbles);
        for (std::uint64_t i = 0; i < nibbles; ++i) {
            unsigned v = unsigned(words_[i >> 4] >> ((i & 15) * 4)) & 0xf;
            out.push_back(digits[v]);
        }
        return out;
    }

    static Bitset from_hex(const std::string &hex, std::uint64_t nbits) {
        Bitset b(nbits);
        if (hex.size() != (nbits + 3) / 4)
            fail(ErrorKind::parse, "onset hex length does not match the declared variable count");
        for (std::uint64_t i = 0; i < hex.size(); ++i) {
            char c = hex[i];
            unsigned v;
            if (c >= '0' && c <= '9') v = unsigned(c - '0');
            else if (c >= 'a' && c <= 'f') v = unsigned(c - 'a') + 10;
            else if (c >= 'A' && c <= 'F') v = unsigned(c - 'A') + 10;
            else fail(ErrorKind::parse, std::string("bad hex digit '") + c + "'");
            b.words_[i >> 4] |= std::uint64_t(v) << ((i & 15) * 4);
        }
        b.trim();
        return b;
    }

private:
    void trim() {
        if (nbits_ & 63) words_.back() &= (~std::uint64_t(0)) >> (64 - (nbits_ & 63));
    }

    std::uint64_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace widthforge
