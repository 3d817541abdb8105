#include "bitmarket/engine.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace bitmarket {

namespace {

// r-th slot (0-based) among producers whose product sits at distance
// best_dist from need. Caller guarantees r < tie_count.
std::size_t nth_best_slot(std::uint64_t need,
                          std::span<const std::uint64_t> products,
                          int best_dist, std::size_t r) {
    std::size_t seen = 0;
    for (std::size_t j = 0; j < products.size(); ++j) {
        if (std::popcount(need ^ products[j]) == best_dist) {
            if (seen == r) return j;
            ++seen;
        }
    }
    throw std::logic_error("tie rank out of range");
}

void pack_strings(std::span<const Consumer> consumers,
                  std::span<const Producer> producers,
                  std::vector<std::uint64_t>& needs,
                  std::vector<std::uint64_t>& products) {
    needs.resize(consumers.size());
    for (std::size_t i = 0; i < consumers.size(); ++i)
        needs[i] = consumers[i].need.bits();
    products.resize(producers.size());
    for (std::size_t j = 0; j < producers.size(); ++j)
        products[j] = producers[j].product.bits();
}

int occupancy_count(std::span<const Consumer> consumers, std::uint64_t center,
                    int radius) {
    int n = 0;
    for (const Consumer& c : consumers)
        if (std::popcount(c.need.bits() ^ center) <= radius) ++n;
    return n;
}

}  // namespace

int transaction_floor(int k, double theta) {
    return k - radius_from_theta(k, theta);
}

std::optional<int> match_consumer(const BitString& need,
                                  std::span<const Producer> producers,
                                  double theta, RandomSource& rng) {
    if (producers.empty()) return std::nullopt;
    const int k = need.k();
    int best_dist = k + 1;
    std::int32_t ties = 0;
    std::size_t first = 0;
    for (std::size_t j = 0; j < producers.size(); ++j) {
        const int d = hamming(need, producers[j].product);
        if (d < best_dist) {
            best_dist = d;
            ties = 1;
            first = j;
        } else if (d == best_dist) {
            ++ties;
        }
    }
    if (k - best_dist < transaction_floor(k, theta)) return std::nullopt;
    std::size_t slot = first;
    if (ties > 1) {
        std::vector<std::uint64_t> products(producers.size());
        for (std::size_t j = 0; j < producers.size(); ++j)
            products[j] = producers[j].product.bits();
        slot = nth_best_slot(need.bits(), products, best_dist,
                             rng.uniform_index(static_cast<std::uint64_t>(ties)));
    }
    return producers[slot].id;
}

StepStats step(MarketState& state, const SimConfig& cfg,
               kernels::Backend backend,
               std::vector<MatchRecord>* match_log) {
    const int k = cfg.k;
    const int floor_q = transaction_floor(k, cfg.theta);
    const std::size_t nc = state.consumers.size();
    const std::size_t np = state.producers.size();

    std::vector<std::uint64_t> needs, products;
    pack_strings(state.consumers, state.producers, needs, products);

    // Phase 1: pure scan, no RNG. Parallel backend gives identical output.
    std::vector<kernels::MatchScan> scans(nc);
    kernels::scan_matches(needs, products, k, scans, backend);

    // Phase 2: threshold gate and tie resolution, consumer index order.
    // Exactly one draw per consumer whose argmax set has several members.
    std::vector<MatchRecord> matches(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        const kernels::MatchScan& sc = scans[i];
        if (sc.first_slot < 0 || sc.best_overlap < floor_q) continue;
        std::int32_t slot = sc.first_slot;
        if (sc.tie_count > 1) {
            const std::size_t r = state.rng.uniform_index(
                static_cast<std::uint64_t>(sc.tie_count));
            slot = static_cast<std::int32_t>(
                nth_best_slot(needs[i], products, k - sc.best_overlap, r));
        }
        matches[i] = MatchRecord{slot, sc.best_overlap};
    }

    // Phase 3: wealth updates against the frozen assignment.
    for (Producer& p : state.producers) p.customers_this_step = 0;
    std::vector<double> revenue(np, 0.0);
    int transactions = 0;
    for (std::size_t i = 0; i < nc; ++i) {
        Consumer& c = state.consumers[i];
        c.satisfaction -= cfg.a_c;  // paid every step, matched or not
        const MatchRecord& m = matches[i];
        if (m.producer_slot >= 0) {
            const double gain = static_cast<double>(m.overlap) / k;
            c.satisfaction += gain;
            revenue[static_cast<std::size_t>(m.producer_slot)] += gain;
            ++state.producers[static_cast<std::size_t>(m.producer_slot)]
                  .customers_this_step;
            ++transactions;
        }
    }
    for (std::size_t j = 0; j < np; ++j)
        state.producers[j].capital += -cfg.a_p + revenue[j];

    StepStats stats;
    if (match_log) *match_log = std::move(matches);
    stats.transactions = transactions;
    for (const Producer& p : state.producers)
        stats.per_producer_customers.emplace(p.id, p.customers_this_step);

    // Phase 4: deaths. Dying producers above already collected this step's
    // revenue; consumer rebirth draws run in index order.
    int deaths = 0;
    for (Consumer& c : state.consumers) {
        if (c.satisfaction <= DEATH_EPS) {
            c.need = random_string(state.rng, k);
            c.satisfaction = cfg.initial_satisfaction;
            c.lifetime_age = 0;
            ++deaths;
        } else {
            ++c.lifetime_age;
        }
    }
    std::erase_if(state.producers,
                  [](const Producer& p) { return p.capital < -DEATH_EPS; });

    state.t += 1;
    stats.t = state.t;
    stats.deaths = deaths;
    stats.n_producers = static_cast<int>(state.producers.size());
    double cap_sum = 0.0;
    for (const Producer& p : state.producers) cap_sum += p.capital;
    stats.mean_capital =
        state.producers.empty() ? 0.0 : cap_sum / static_cast<double>(state.producers.size());
    double sat_sum = 0.0;
    for (const Consumer& c : state.consumers) sat_sum += c.satisfaction;
    stats.mean_satisfaction = sat_sum / static_cast<double>(nc);
    return stats;
}

Trajectory run(const SimConfig& cfg, const RunOptions& opts) {
    validate(cfg);
    if (opts.track_basins &&
        (opts.track_radius < 0 || opts.track_radius > cfg.k))
        throw std::invalid_argument("track_radius must be in [0, k]");
    if (opts.track_random_sites < 0)
        throw std::invalid_argument("track_random_sites must be >= 0");
    if (opts.hist_stride < 0)
        throw std::invalid_argument("hist_stride must be >= 0");
    Trajectory traj;
    MarketState state = init_market(cfg, RandomSource(cfg.seed));
    traj.steps.reserve(static_cast<std::size_t>(cfg.steps));

    if (opts.track_basins) {
        for (const Producer& p : state.producers)
            traj.occupancy.push_back(
                {"p" + std::to_string(p.id), p.product, {}});
        RandomSource site_rng(mix64(cfg.seed ^ TRACK_STREAM_TAG));
        for (int s = 0; s < opts.track_random_sites; ++s)
            traj.occupancy.push_back(
                {"s" + std::to_string(s), random_string(site_rng, cfg.k), {}});
        for (OccupancySeries& series : traj.occupancy) {
            series.counts.reserve(static_cast<std::size_t>(cfg.steps) + 1);
            series.counts.push_back(occupancy_count(
                state.consumers, series.center.bits(), opts.track_radius));
        }
    }

    std::vector<MatchRecord> matches;
    double last_overlap_sum = 0.0;
    int last_transactions = 0;
    for (long t = 1; t <= cfg.steps; ++t) {
        StepStats stats = step(state, cfg, opts.backend, &matches);
        last_overlap_sum = 0.0;
        last_transactions = stats.transactions;
        for (const MatchRecord& m : matches)
            if (m.producer_slot >= 0) last_overlap_sum += m.overlap;
        if (!opts.record_customer_maps) stats.per_producer_customers.clear();

        if (opts.track_basins)
            for (OccupancySeries& series : traj.occupancy)
                series.counts.push_back(occupancy_count(
                    state.consumers, series.center.bits(), opts.track_radius));

        if (opts.hist_stride > 0 &&
            (t % opts.hist_stride == 0 || t == cfg.steps)) {
            std::vector<std::uint64_t> needs(state.consumers.size());
            for (std::size_t i = 0; i < needs.size(); ++i)
                needs[i] = state.consumers[i].need.bits();
            traj.hist_samples.push_back(
                {t, kernels::overlap_pair_counts(needs, cfg.k, opts.backend)});
        }

        if (opts.log_every > 0 && t % opts.log_every == 0)
            std::fprintf(stderr,
                         "t=%ld producers=%d mean_capital=%.6g mean_S=%.6g deaths=%d\n",
                         t, stats.n_producers, stats.mean_capital,
                         stats.mean_satisfaction, stats.deaths);

        traj.steps.push_back(std::move(stats));
    }

    traj.final_mean_rel_overlap =
        last_transactions > 0
            ? last_overlap_sum / (static_cast<double>(last_transactions) * cfg.k)
            : std::numeric_limits<double>::quiet_NaN();
    traj.final_state = std::move(state);
    return traj;
}

}  // namespace bitmarket
