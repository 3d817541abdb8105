#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bitmarket/bitstring.hpp"
#include "bitmarket/kernels.hpp"
#include "bitmarket/population.hpp"

namespace bitmarket {

// Condensed-consumer fraction estimated from mean satisfaction: a condensed
// consumer holds S_0, a starving one averages S_0/2, so
// f = (mean_S - S_0/2) / (S_0/2). Raw value, no clamping; sampling noise may
// push it slightly outside [0, 1].
double condensed_fraction(double mean_satisfaction, double s0);

// Histogram of pairwise overlaps over unordered pairs, k+1 bins. All strings
// must share k; fewer than two strings gives all zeros.
std::vector<std::uint64_t> overlap_histogram(
    std::span<const BitString> strings, int k,
    kernels::Backend backend = kernels::Backend::serial);

// Mirror of overlap_histogram in Hamming distance: d[i] == h[k-i].
std::vector<std::uint64_t> distance_histogram(
    std::span<const BitString> strings, int k,
    kernels::Backend backend = kernels::Backend::serial);

// h[k] / h[k/2], the condensation order ratio. k must be even. Undefined
// (nullopt) when h[k/2] is zero; never reported as 0 or infinity.
std::optional<double> order_ratio(std::span<const std::uint64_t> hist, int k);

// Equilibrium ceiling on surviving producers under uniform spread:
// N_c * <q>/k / a_p. a_p must be positive; the bound is infinite at a_p = 0
// and that case is rejected rather than encoded as a value.
double producer_capacity_bound(int n_consumers, double a_p,
                               double mean_rel_overlap);

// Same bound with the empirical default for <q>/k: the mean relative overlap
// of the trajectory's final-step transactions. NaN when that step had none.
struct Trajectory;  // engine.hpp
double producer_capacity_bound(const Trajectory& traj, const SimConfig& cfg);

enum class Regime { niche, competition };

struct RegimeEstimate {
    Regime regime = Regime::niche;
    double coverage_ratio = 0.0;  // basin_size(k, theta) * N_p / 2^k
};

// Competition when the producers' basins cover the hypercube more than once
// (ratio > 1), niche otherwise. Depends only on (k, theta, N_p).
RegimeEstimate regime_estimate(int k, double theta, int n_producers);

// Consumers whose need lies within Hamming `radius` of center.
int basin_occupancy(std::span<const Consumer> consumers,
                    const BitString& center, int radius);

// Continuous-approximation lifetime of a consumer pinned at Hamming distance
// d from the only producer: S_0 / (a_c - gain), where gain = (k-d)/k if the
// distance clears theta and 0 otherwise. Infinite when the net flow is
// non-negative. The discrete simulator agrees exactly whenever the value is
// an integer.
double expected_lifetime(int d, double a_c, double theta, int k, double s0);

// Directly measured condensation: fraction of consumers whose best relative
// overlap against the live producers equals 1.
double exact_match_fraction(const MarketState& state);

}  // namespace bitmarket
