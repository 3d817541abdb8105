#include "bitmarket/bitstring.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace bitmarket {

namespace {

std::uint64_t low_mask(int k) {
    return k == 64 ? ~0ULL : ((1ULL << k) - 1);
}

void check_k(int k) {
    if (k < 1 || k > 64)
        throw std::invalid_argument("k must be in [1, 64] (got " + std::to_string(k) + ")");
}

void check_same_k(const BitString& a, const BitString& b) {
    if (a.k() != b.k())
        throw std::invalid_argument("bit strings have different k (" +
                                    std::to_string(a.k()) + " vs " + std::to_string(b.k()) + ")");
}

}  // namespace

BitString::BitString(std::uint64_t bits, int k) : bits_(bits), k_(k) {
    check_k(k);
    if (bits & ~low_mask(k))
        throw std::invalid_argument("bits set beyond position k-1");
}

BitString BitString::parse(const std::string& text) {
    const int k = static_cast<int>(text.size());
    check_k(k);
    std::uint64_t bits = 0;
    for (int i = 0; i < k; ++i) {
        const char c = text[i];
        if (c != '0' && c != '1')
            throw std::invalid_argument("bit string may contain only '0' and '1'");
        if (c == '1')
            bits |= 1ULL << (k - 1 - i);  // leftmost char is position k-1
    }
    return BitString(bits, k);
}

BitString BitString::complement() const {
    return BitString(~bits_ & low_mask(k_), k_);
}

std::string BitString::to_string() const {
    std::string s(static_cast<std::size_t>(k_), '0');
    for (int pos = 0; pos < k_; ++pos)
        if (bit(pos)) s[k_ - 1 - pos] = '1';
    return s;
}

int overlap(const BitString& a, const BitString& b) {
    check_same_k(a, b);
    return a.k() - std::popcount(a.bits() ^ b.bits());
}

int hamming(const BitString& a, const BitString& b) {
    check_same_k(a, b);
    return std::popcount(a.bits() ^ b.bits());
}

int radius_from_theta(int k, double theta) {
    check_k(k);
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("theta must be in [0, 1] (got " + std::to_string(theta) + ")");
    return static_cast<int>(std::floor(k * (1.0 - theta) + 1e-9));
}

std::uint64_t basin_size(int k, double theta) {
    const int radius = radius_from_theta(k, theta);
    // C(k, d) built incrementally; intermediates need 128 bits near k = 64.
    unsigned __int128 total = 0;
    unsigned __int128 binom = 1;
    for (int d = 0; d <= radius; ++d) {
        total += binom;
        binom = binom * static_cast<unsigned>(k - d) / static_cast<unsigned>(d + 1);
    }
    if (total > static_cast<unsigned __int128>(~0ULL))
        throw std::overflow_error("basin size 2^64 does not fit a 64-bit count");
    return static_cast<std::uint64_t>(total);
}

std::vector<BitString> enumerate_ball(const BitString& center, int radius) {
    const int k = center.k();
    check_k(k);
    if (radius < 0 || radius > k)
        throw std::invalid_argument("radius must be in [0, k] (got " + std::to_string(radius) + ")");

    std::vector<BitString> out;
    out.reserve(static_cast<std::size_t>(basin_size(k, 1.0 - static_cast<double>(radius) / k)));
    out.push_back(center);
    const unsigned __int128 limit = static_cast<unsigned __int128>(1) << k;
    for (int d = 1; d <= radius; ++d) {
        // Gosper's hack over all k-bit masks of popcount d.
        unsigned __int128 mask = (static_cast<unsigned __int128>(1) << d) - 1;
        while (mask < limit) {
            out.emplace_back(center.bits() ^ static_cast<std::uint64_t>(mask), k);
            const unsigned __int128 c = mask & (~mask + 1);
            const unsigned __int128 r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    return out;
}

BitString random_string(RandomSource& rng, int k) {
    check_k(k);
    return BitString(rng.next() & low_mask(k), k);
}

}  // namespace bitmarket
