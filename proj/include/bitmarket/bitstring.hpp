#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bitmarket/rng.hpp"

namespace bitmarket {

// A k-bit trait string (k <= 64) packed into one word: position i lives at
// bit i, positions >= k are always zero. Only the equality structure of the
// bits matters to the model; the position convention is fixed here so file
// output is well defined. Text form is written most-significant position
// first, i.e. position k-1 is the leftmost character.
class BitString {
public:
    BitString() = default;  // empty sentinel, k() == 0
    BitString(std::uint64_t bits, int k);

    // Parses a '0'/'1' string, leftmost character = position k-1.
    static BitString parse(const std::string& text);

    std::uint64_t bits() const { return bits_; }
    int k() const { return k_; }
    bool bit(int pos) const { return (bits_ >> pos) & 1u; }

    BitString complement() const;
    std::string to_string() const;

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::uint64_t bits_ = 0;
    int k_ = 0;
};

// Count of positions where a and b agree. Throws std::invalid_argument when
// the two strings have different k.
int overlap(const BitString& a, const BitString& b);

// k - overlap(a, b).
int hamming(const BitString& a, const BitString& b);

// Hamming radius equivalent to a relative-overlap threshold theta:
// floor(k*(1-theta) + 1e-9). The epsilon absorbs double rounding
// (0.9*10 evaluating to 8.999... would otherwise drop the boundary shell).
int radius_from_theta(int k, double theta);

// Number of strings whose relative overlap with a fixed center is >= theta:
// sum of C(k, d) for d = 0 .. radius_from_theta(k, theta).
// Throws std::overflow_error for the one case (k=64, theta=0) where the
// count, 2^64, does not fit the return type.
std::uint64_t basin_size(int k, double theta);

// All strings at Hamming distance <= radius from center, center included.
std::vector<BitString> enumerate_ball(const BitString& center, int radius);

// Each bit independently 0 or 1 with probability 1/2.
// Consumes exactly one RNG draw.
BitString random_string(RandomSource& rng, int k);

}  // namespace bitmarket
