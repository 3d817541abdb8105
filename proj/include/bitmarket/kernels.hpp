#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bitmarket::kernels {

// Each kernel exists twice: a serial reference implementation and an OpenMP
// one. They produce identical results (pure integer arithmetic, no RNG,
// disjoint writes), which the tests assert; the benchmark compares their
// throughput. Backend::openmp falls back to serial in builds without OpenMP.
enum class Backend { serial, openmp };

// Result of scanning one need string against the whole producer set.
struct MatchScan {
    std::int32_t best_overlap = -1;  // max overlap; -1 when there are no producers
    std::int32_t tie_count = 0;      // size of the argmax set
    std::int32_t first_slot = -1;    // lowest slot attaining the max

    friend bool operator==(const MatchScan&, const MatchScan&) = default;
};

// For every need word, the best overlap over all product words, the tie
// count and the first argmax slot. Strings are packed k-bit words; out must
// have the same length as needs.
void scan_matches(std::span<const std::uint64_t> needs,
                  std::span<const std::uint64_t> products, int k,
                  std::span<MatchScan> out, Backend backend);

// Pairwise overlap counts: result[v] = #{ i < j : overlap(s_i, s_j) == v },
// result has k+1 entries.
std::vector<std::uint64_t> overlap_pair_counts(
    std::span<const std::uint64_t> strings, int k, Backend backend);

void scan_matches_serial(std::span<const std::uint64_t> needs,
                         std::span<const std::uint64_t> products, int k,
                         std::span<MatchScan> out);
void scan_matches_omp(std::span<const std::uint64_t> needs,
                      std::span<const std::uint64_t> products, int k,
                      std::span<MatchScan> out);

std::vector<std::uint64_t> overlap_pair_counts_serial(
    std::span<const std::uint64_t> strings, int k);
std::vector<std::uint64_t> overlap_pair_counts_omp(
    std::span<const std::uint64_t> strings, int k);

}  // namespace bitmarket::kernels
