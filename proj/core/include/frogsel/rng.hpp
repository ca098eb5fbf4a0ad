#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace frogsel {

// All randomness in the library flows through uniform01() so that any
// example or test can inject an explicit value stream.
struct RandomSource {
    virtual ~RandomSource() = default;
    // Uniform double in [0, 1).
    virtual double uniform01() = 0;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from (base, a, b) via splitmix64,
// so concurrent workers get reproducible streams regardless of scheduling.
inline std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = base;
    std::uint64_t h = splitmix64(s);
    s = h ^ (a + 0x9e3779b97f4a7c15ull);
    h = splitmix64(s);
    s = h ^ (b + 0xbf58476d1ce4e5b9ull);
    return splitmix64(s);
}

// mt19937_64 with doubles taken from the top 53 bits: (x >> 11) * 2^-53.
// This identifier is echoed into reports so other implementations can
// reproduce runs from the same seed.
inline constexpr const char* kRngAlgorithm = "mt19937_64(u01=top53)";

class SeededRng final : public RandomSource {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() override {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 gen_;
};

// Replays a fixed list of draws; throws when exhausted.
class FixedSource final : public RandomSource {
public:
    explicit FixedSource(std::vector<double> values) : values_(std::move(values)) {}

    double uniform01() override {
        if (pos_ >= values_.size()) throw std::out_of_range("FixedSource: stream exhausted");
        return values_[pos_++];
    }

    std::size_t consumed() const { return pos_; }

private:
    std::vector<double> values_;
    std::size_t pos_ = 0;
};

// Index in [0, n) as floor(u * n); clamped so u -> 1 never overflows.
inline std::size_t uniform_index(RandomSource& rng, std::size_t n) {
    const auto i = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n));
    return i >= n ? n - 1 : i;
}

}  // namespace frogsel
