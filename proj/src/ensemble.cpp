#include "bitmarket/ensemble.hpp"

#include <bit>
#include <cmath>

#include "bitmarket/observables.hpp"

namespace bitmarket {

namespace {

// Neumaier-compensated sum in fixed index order. Slot-ordered input makes
// every aggregate independent of seed execution order.
double compensated_sum(std::span<const double> values) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

SeedStat stat_of(std::span<const double> values) {
    if (values.empty()) return {0.0, 0.0};
    const double n = static_cast<double>(values.size());
    const double mean = compensated_sum(values) / n;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - mean;
        sq[i] = d * d;
    }
    return {mean, std::sqrt(compensated_sum(sq) / n)};
}

std::uint64_t fnv1a64(std::span<const std::uint64_t> words) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t w : words) {
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (w >> (8 * byte)) & 0xffULL;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

}  // namespace

FinalObservables final_observables(const Trajectory& traj, const SimConfig& cfg) {
    FinalObservables f;
    const MarketState& state = traj.final_state;
    f.survivors = static_cast<int>(state.producers.size());
    double cap = 0.0;
    for (const Producer& p : state.producers) cap += p.capital;
    f.mean_capital = state.producers.empty()
                         ? 0.0
                         : cap / static_cast<double>(state.producers.size());
    double sat = 0.0;
    for (const Consumer& c : state.consumers) sat += c.satisfaction;
    f.mean_satisfaction = sat / static_cast<double>(state.consumers.size());
    f.condensed_fraction_est =
        condensed_fraction(f.mean_satisfaction, cfg.initial_satisfaction);
    f.exact_match_fraction = exact_match_fraction(state);

    std::vector<BitString> needs;
    needs.reserve(state.consumers.size());
    for (const Consumer& c : state.consumers) needs.push_back(c.need);
    if (cfg.k % 2 == 0) {
        const auto hist = overlap_histogram(needs, cfg.k);
        f.order_ratio = order_ratio(hist, cfg.k);
    }
    return f;
}

std::vector<FinalObservables> run_seeds(const SimConfig& base, int n_seeds,
                                        std::uint64_t seed_base,
                                        kernels::Backend backend,
                                        SeedOrder order) {
    std::vector<FinalObservables> finals(static_cast<std::size_t>(n_seeds));
    RunOptions opts;
    opts.backend = kernels::Backend::serial;  // parallelism lives across seeds
    opts.record_customer_maps = false;
    opts.hist_stride = 0;

    const bool parallel = backend == kernels::Backend::openmp;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < n_seeds; ++i) {
        const int slot = order == SeedOrder::forward ? i : n_seeds - 1 - i;
        SimConfig cfg = base;
        cfg.seed = seed_base + static_cast<std::uint64_t>(slot);
        finals[static_cast<std::size_t>(slot)] =
            final_observables(run(cfg, opts), cfg);
    }
    return finals;
}

EnsembleRecord aggregate(int n_producers, double a_c, double theta,
                         std::span<const FinalObservables> finals) {
    EnsembleRecord rec;
    rec.n_producers = n_producers;
    rec.a_c = a_c;
    rec.theta = theta;
    rec.n_seeds = static_cast<int>(finals.size());

    std::vector<double> v(finals.size());
    auto collect = [&](auto&& get) -> std::span<const double> {
        for (std::size_t i = 0; i < finals.size(); ++i) v[i] = get(finals[i]);
        return v;
    };
    rec.survivors = stat_of(collect(
        [](const FinalObservables& f) { return static_cast<double>(f.survivors); }));
    rec.mean_capital = stat_of(
        collect([](const FinalObservables& f) { return f.mean_capital; }));
    rec.mean_satisfaction = stat_of(
        collect([](const FinalObservables& f) { return f.mean_satisfaction; }));
    rec.condensed_fraction = stat_of(collect(
        [](const FinalObservables& f) { return f.condensed_fraction_est; }));
    rec.exact_match = stat_of(collect(
        [](const FinalObservables& f) { return f.exact_match_fraction; }));

    std::vector<double> defined;
    defined.reserve(finals.size());
    for (const FinalObservables& f : finals)
        if (f.order_ratio) defined.push_back(*f.order_ratio);
    rec.order_ratio_defined = static_cast<int>(defined.size());
    rec.order_ratio = stat_of(defined);
    return rec;
}

EnsembleRecord run_ensemble(const SimConfig& base, int n_seeds,
                            std::uint64_t seed_base, kernels::Backend backend) {
    const auto finals = run_seeds(base, n_seeds, seed_base, backend);
    return aggregate(base.n_producers, base.a_c, base.theta, finals);
}

std::uint64_t cell_seed_base(std::uint64_t seed_base, int n_producers,
                             double a_c, double theta) {
    const std::uint64_t words[3] = {
        static_cast<std::uint64_t>(static_cast<std::int64_t>(n_producers)),
        std::bit_cast<std::uint64_t>(a_c),
        std::bit_cast<std::uint64_t>(theta),
    };
    return seed_base + fnv1a64(words);
}

std::vector<EnsembleRecord> run_sweep(const SweepSpec& spec,
                                      kernels::Backend backend) {
    validate(spec);
    std::vector<EnsembleRecord> records;
    records.reserve(spec.np_grid.size() * spec.ac_values.size() *
                    spec.theta_values.size());
    for (int np : spec.np_grid) {
        for (double ac : spec.ac_values) {
            for (double theta : spec.theta_values) {
                SimConfig cfg = spec.base;
                cfg.n_producers = np;
                cfg.a_c = ac;
                cfg.theta = theta;
                records.push_back(run_ensemble(
                    cfg, spec.n_seeds,
                    cell_seed_base(spec.seed_base, np, ac, theta), backend));
            }
        }
    }
    return records;
}

}  // namespace bitmarket
