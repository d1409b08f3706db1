#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>

namespace skan {

// Deterministic 64-bit PRNG used everywhere a seed appears (weight init,
// epoch shuffling), pinned to fixed algorithms so a seed denotes the same
// stream on any platform:
//   - state expansion: splitmix64 (Steele, Lea & Flood 2014)
//   - generator:       xoshiro256++ (Blackman & Vigna 2019)
//   - uniform01:       top 53 bits of one draw, scaled by 2^-53
//   - below(n):        128-bit multiply-high of one draw
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    uint64_t next() {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n), n >= 1. Multiply-high keeps the draw count
    // at exactly one per call (a rejection loop would make stream positions
    // depend on earlier values); the O(n/2^64) bias is irrelevant here.
    uint64_t below(uint64_t n) {
        return uint64_t((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Fisher-Yates, descending index order.
    template <class Seq>
    void shuffle(Seq& seq) {
        for (size_t i = seq.size(); i > 1; --i) {
            const size_t j = size_t(below(i));
            std::swap(seq[i - 1], seq[j]);
        }
    }

private:
    static uint64_t splitmix64(uint64_t& x) {
        uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::array<uint64_t, 4> state_;
};

}  // namespace skan
