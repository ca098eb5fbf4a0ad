#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace frogsel {

// Fixed-length bit vector over feature indices; bit i selects feature i.
class Bitmask {
public:
    Bitmask() = default;

    explicit Bitmask(std::size_t bits, bool value = false)
        : nbits_(bits), words_(word_count(bits), value ? ~std::uint64_t{0} : 0) {
        trim();
    }

    static Bitmask all_set(std::size_t bits) { return Bitmask(bits, true); }

    // Parses "10110"; character k is bit k.
    static Bitmask from_string(std::string_view s) {
        Bitmask m(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') m.set(i);
            else if (s[i] != '0') throw std::invalid_argument("Bitmask: expected only '0'/'1'");
        }
        return m;
    }

    std::size_t size() const { return nbits_; }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool v = true) {
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (v) words_[i >> 6] |= bit;
        else words_[i >> 6] &= ~bit;
    }

    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool any() const {
        for (auto w : words_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    std::string to_string() const {
        std::string s(nbits_, '0');
        for (std::size_t i = 0; i < nbits_; ++i) if (test(i)) s[i] = '1';
        return s;
    }

    std::vector<std::size_t> set_positions() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for (std::size_t i = 0; i < nbits_; ++i) if (test(i)) out.push_back(i);
        return out;
    }

    std::size_t hamming(const Bitmask& other) const {
        if (other.nbits_ != nbits_) throw std::invalid_argument("Bitmask: length mismatch");
        std::size_t d = 0;
        for (std::size_t w = 0; w < words_.size(); ++w)
            d += static_cast<std::size_t>(std::popcount(words_[w] ^ other.words_[w]));
        return d;
    }

    // Order on the bit string read from index 0; '0' sorts before '1'.
    bool lex_less(const Bitmask& other) const {
        if (nbits_ != other.nbits_) return nbits_ < other.nbits_;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            const std::uint64_t diff = words_[w] ^ other.words_[w];
            if (diff) {
                const int first = std::countr_zero(diff);
                return !((words_[w] >> first) & 1u);
            }
        }
        return false;
    }

    friend bool operator==(const Bitmask& a, const Bitmask& b) {
        return a.nbits_ == b.nbits_ && a.words_ == b.words_;
    }
    friend bool operator!=(const Bitmask& a, const Bitmask& b) { return !(a == b); }

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    static std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

    void trim() {
        const std::size_t tail = nbits_ & 63;
        if (tail && !words_.empty()) words_.back() &= (std::uint64_t{1} << tail) - 1;
    }

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitmaskHash {
    std::size_t operator()(const Bitmask& m) const {
        // FNV-1a over the words plus the length.
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(m.size());
        for (auto w : m.words()) mix(w);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace frogsel
