#include "bitmarket/observables.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bitmarket/engine.hpp"

namespace bitmarket {

namespace {

std::vector<std::uint64_t> pack_checked(std::span<const BitString> strings,
                                        int k) {
    std::vector<std::uint64_t> words(strings.size());
    for (std::size_t i = 0; i < strings.size(); ++i) {
        if (strings[i].k() != k)
            throw std::invalid_argument("histogram input has mixed k");
        words[i] = strings[i].bits();
    }
    return words;
}

}  // namespace

double condensed_fraction(double mean_satisfaction, double s0) {
    if (!(s0 > 0.0)) throw std::invalid_argument("S_0 must be > 0");
    const double half = s0 / 2.0;
    return (mean_satisfaction - half) / half;
}

std::vector<std::uint64_t> overlap_histogram(std::span<const BitString> strings,
                                             int k, kernels::Backend backend) {
    const auto words = pack_checked(strings, k);
    return kernels::overlap_pair_counts(words, k, backend);
}

std::vector<std::uint64_t> distance_histogram(std::span<const BitString> strings,
                                              int k, kernels::Backend backend) {
    auto h = overlap_histogram(strings, k, backend);
    std::vector<std::uint64_t> d(h.size());
    for (std::size_t v = 0; v < h.size(); ++v)
        d[v] = h[static_cast<std::size_t>(k) - v];
    return d;
}

std::optional<double> order_ratio(std::span<const std::uint64_t> hist, int k) {
    if (k < 2 || k % 2 != 0)
        throw std::invalid_argument("order ratio needs even k");
    if (hist.size() != static_cast<std::size_t>(k) + 1)
        throw std::invalid_argument("histogram must have k+1 bins");
    const std::uint64_t denom = hist[static_cast<std::size_t>(k) / 2];
    if (denom == 0) return std::nullopt;
    return static_cast<double>(hist[static_cast<std::size_t>(k)]) /
           static_cast<double>(denom);
}

double producer_capacity_bound(int n_consumers, double a_p,
                               double mean_rel_overlap) {
    if (!(a_p > 0.0))
        throw std::invalid_argument("a_p must be > 0 (bound is infinite at 0)");
    return static_cast<double>(n_consumers) * mean_rel_overlap / a_p;
}

double producer_capacity_bound(const Trajectory& traj, const SimConfig& cfg) {
    if (std::isnan(traj.final_mean_rel_overlap))
        return std::numeric_limits<double>::quiet_NaN();
    return producer_capacity_bound(cfg.n_consumers, cfg.a_p,
                                   traj.final_mean_rel_overlap);
}

RegimeEstimate regime_estimate(int k, double theta, int n_producers) {
    const double sites = std::ldexp(1.0, k);  // 2^k
    const double ratio =
        static_cast<double>(basin_size(k, theta)) * n_producers / sites;
    return {ratio > 1.0 ? Regime::competition : Regime::niche, ratio};
}

int basin_occupancy(std::span<const Consumer> consumers,
                    const BitString& center, int radius) {
    if (radius < 0 || radius > center.k())
        throw std::invalid_argument("radius must be in [0, k]");
    int n = 0;
    for (const Consumer& c : consumers)
        if (hamming(c.need, center) <= radius) ++n;
    return n;
}

double expected_lifetime(int d, double a_c, double theta, int k, double s0) {
    if (d < 0 || d > k) throw std::invalid_argument("d must be in [0, k]");
    const int q = k - d;
    const double gain =
        q >= transaction_floor(k, theta) ? static_cast<double>(q) / k : 0.0;
    const double net = a_c - gain;
    if (net <= 0.0) return std::numeric_limits<double>::infinity();
    return s0 / net;
}

double exact_match_fraction(const MarketState& state) {
    if (state.consumers.empty()) return 0.0;
    int matched = 0;
    for (const Consumer& c : state.consumers) {
        for (const Producer& p : state.producers) {
            if (c.need.bits() == p.product.bits()) {
                ++matched;
                break;
            }
        }
    }
    return static_cast<double>(matched) / static_cast<double>(state.consumers.size());
}

}  // namespace bitmarket
