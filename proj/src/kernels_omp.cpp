#include <bit>

#include "bitmarket/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bitmarket::kernels {

// Both kernels are deterministic under any schedule: scan_matches writes one
// disjoint slot per iteration, and the histogram merges per-thread integer
// counts, so results are bit-identical to the serial reference.

void scan_matches_omp(std::span<const std::uint64_t> needs,
                      std::span<const std::uint64_t> products, int k,
                      std::span<MatchScan> out) {
#ifdef _OPENMP
    const std::int64_t n = static_cast<std::int64_t>(needs.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        MatchScan r;
        int best_dist = k + 1;
        const std::uint64_t need = needs[static_cast<std::size_t>(i)];
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
        out[static_cast<std::size_t>(i)] = r;
    }
#else
    scan_matches_serial(needs, products, k, out);
#endif
}

std::vector<std::uint64_t> overlap_pair_counts_omp(
    std::span<const std::uint64_t> strings, int k) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(k) + 1, 0);
#ifdef _OPENMP
    const std::int64_t n = static_cast<std::int64_t>(strings.size());
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(counts.size(), 0);
        // dynamic schedule: row i costs n-i-1 popcounts
#pragma omp for schedule(dynamic, 16) nowait
        for (std::int64_t i = 0; i < n; ++i)
            for (std::int64_t j = i + 1; j < n; ++j)
                ++local[static_cast<std::size_t>(
                    k - std::popcount(strings[static_cast<std::size_t>(i)] ^
                                      strings[static_cast<std::size_t>(j)]))];
#pragma omp critical
        for (std::size_t v = 0; v < counts.size(); ++v) counts[v] += local[v];
    }
    return counts;
#else
    return overlap_pair_counts_serial(strings, k);
#endif
}

}  // namespace bitmarket::kernels
