#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bitmarket/config.hpp"
#include "bitmarket/kernels.hpp"
#include "bitmarket/population.hpp"

namespace bitmarket {

// Per-step record, captured after wealth updates and deaths have been
// applied. per_producer_customers covers the producers alive at step start,
// including any that were removed during the step.
struct StepStats {
    long t = 0;
    int n_producers = 0;
    double mean_capital = 0.0;  // 0 when no producers remain
    double mean_satisfaction = 0.0;
    int deaths = 0;  // consumers replaced this step
    int transactions = 0;
    std::map<int, int> per_producer_customers;  // producer id -> customers
};

// Outcome of the matching phase for one consumer, before wealth updates.
// producer_slot indexes the step-start producer list; -1 means no
// transaction this step.
struct MatchRecord {
    std::int32_t producer_slot = -1;
    std::int32_t overlap = -1;
};

// Occupancy observer: consumer count inside the Hamming ball around one
// tracked center. counts[0] is the state at t = 0.
struct OccupancySeries {
    std::string label;  // "p<id>" for producer centers, "s<i>" for random sites
    BitString center;
    std::vector<int> counts;
};

struct HistSample {
    long t = 0;
    std::vector<std::uint64_t> need_overlap;  // pairwise counts among needs
};

struct RunOptions {
    kernels::Backend backend = kernels::Backend::serial;
    bool record_customer_maps = true;  // fill StepStats::per_producer_customers
    int hist_stride = 100;             // sample need-overlap histogram every N steps; 0 = off
    // Basin tracking. Centers are every initial producer plus
    // track_random_sites uniform random strings. Random sites come from an
    // auxiliary stream seeded with mix64(seed ^ TRACK_STREAM_TAG), so
    // enabling tracking never shifts the main stream: the trajectory is
    // bit-identical with tracking on or off.
    bool track_basins = false;
    int track_radius = 2;
    int track_random_sites = 2;
    int log_every = 0;  // progress line to stderr every N steps; 0 = quiet
};

inline constexpr std::uint64_t TRACK_STREAM_TAG = 0x6261736b65747331ULL;

struct Trajectory {
    std::vector<StepStats> steps;
    MarketState final_state;
    std::vector<OccupancySeries> occupancy;  // empty unless tracking enabled
    std::vector<HistSample> hist_samples;    // empty unless hist_stride > 0
    // Mean q/k over the final step's transactions; NaN when the final step
    // had none (or steps == 0). Empirical input for the capacity bound.
    double final_mean_rel_overlap = 0.0;
};

// Dead band absorbing double-rounding dust at the death thresholds, so that
// integer-valued lifetimes (e.g. 50 steps at 0.1 net loss per step) come out
// exact. Semantics are "S <= 0" and "C < 0" up to this noise floor.
inline constexpr double DEATH_EPS = 1e-9;

// Smallest overlap that clears the recognition threshold. Evaluated on the
// integer side (q >= k - radius_from_theta(k, theta)), which makes the
// transaction predicate coincide with basin membership.
int transaction_floor(int k, double theta);

// The producer with the largest overlap against need, if that overlap clears
// theta; ties resolved uniformly at random. Returns the producer's id.
// Consumes exactly one RNG draw when the argmax set has more than one
// member, and none otherwise.
std::optional<int> match_consumer(const BitString& need,
                                  std::span<const Producer> producers,
                                  double theta, RandomSource& rng);

// One synchronous step:
//   1. every consumer matched against the step-start producer set
//      (tie-break draws in consumer index order)
//   2. consumer update  S += -a_c + q/k (gain only when matched)
//   3. producer update  C += -a_p + sum of q/k over its customers
//   4. consumers at S <= 0 replaced (fresh random need, S_0; draws in
//      consumer index order); producers at C < 0 removed
// When match_log is given it receives one MatchRecord per consumer.
StepStats step(MarketState& state, const SimConfig& cfg,
               kernels::Backend backend = kernels::Backend::serial,
               std::vector<MatchRecord>* match_log = nullptr);

// init_market + `steps` calls to step(). Deterministic given cfg.seed.
Trajectory run(const SimConfig& cfg, const RunOptions& opts = {});

}  // namespace bitmarket
