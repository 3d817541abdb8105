#pragma once

#include <cstdint>
#include <random>

namespace bitmarket {

// Single random stream used by a simulation run. Every operation that
// touches the stream consumes a fixed, documented number of draws:
//
//   next()           one raw 64-bit draw
//   uniform_index(n) exactly one draw for any n >= 1
//   random_string()  exactly one draw (see bitstring.hpp)
//
// Fixed draw counts are what make replays byte-stable: the position of the
// stream after any simulation event is a pure function of the event sequence.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform index in [0, n). Multiply-shift on a single draw; the bias is
    // O(n / 2^64), irrelevant at the population sizes used here.
    std::size_t uniform_index(std::uint64_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    friend bool operator==(const RandomSource& a, const RandomSource& b) {
        return a.engine_ == b.engine_;
    }

private:
    std::mt19937_64 engine_;  // sequence is pinned by the standard
};

// Stateless 64-bit mixer, used to derive auxiliary seeds (observer streams,
// sweep cells) without disturbing the main stream.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace bitmarket
