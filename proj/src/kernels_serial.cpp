#include <bit>

#include "bitmarket/kernels.hpp"

namespace bitmarket::kernels {

namespace {

// Best match of one need against all products. Argmax over overlap is
// argmin over XOR popcount, so k only enters when converting back.
inline MatchScan scan_one(std::uint64_t need,
                          std::span<const std::uint64_t> products, int k) {
    MatchScan r;
    int best_dist = k + 1;
    for (std::size_t j = 0; j < products.size(); ++j) {
        const int d = std::popcount(need ^ products[j]);
        if (d < best_dist) {
            best_dist = d;
            r.tie_count = 1;
            r.first_slot = static_cast<std::int32_t>(j);
        } else if (d == best_dist) {
            ++r.tie_count;
        }
    }
    if (r.first_slot >= 0) r.best_overlap = k - best_dist;
    return r;
}

}  // namespace

void scan_matches_serial(std::span<const std::uint64_t> needs,
                         std::span<const std::uint64_t> products, int k,
                         std::span<MatchScan> out) {
    for (std::size_t i = 0; i < needs.size(); ++i)
        out[i] = scan_one(needs[i], products, k);
}

std::vector<std::uint64_t> overlap_pair_counts_serial(
    std::span<const std::uint64_t> strings, int k) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(k) + 1, 0);
    for (std::size_t i = 0; i + 1 < strings.size(); ++i)
        for (std::size_t j = i + 1; j < strings.size(); ++j)
            ++counts[static_cast<std::size_t>(
                k - std::popcount(strings[i] ^ strings[j]))];
    return counts;
}

void scan_matches(std::span<const std::uint64_t> needs,
                  std::span<const std::uint64_t> products, int k,
                  std::span<MatchScan> out, Backend backend) {
    if (backend == Backend::openmp)
        scan_matches_omp(needs, products, k, out);
    else
        scan_matches_serial(needs, products, k, out);
}

std::vector<std::uint64_t> overlap_pair_counts(
    std::span<const std::uint64_t> strings, int k, Backend backend) {
    return backend == Backend::openmp ? overlap_pair_counts_omp(strings, k)
                                      : overlap_pair_counts_serial(strings, k);
}

}  // namespace bitmarket::kernels
