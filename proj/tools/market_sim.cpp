// Command-line front end: single runs, seed-averaged parameter sweeps, and
// the two analytic tables (lifetimes, regime). File formats are described in
// the README.

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bitmarket/engine.hpp"
#include "bitmarket/ensemble.hpp"
#include "bitmarket/io.hpp"
#include "bitmarket/observables.hpp"

namespace {

using namespace bitmarket;

// The ten config keys, exposed 1:1 as flags; flags override file keys.
struct ConfigFlags {
    static constexpr const char* keys[10] = {"k",   "theta", "a_c", "a_p",
                                             "N_p", "N_c",   "C_p", "S_0",
                                             "steps", "seed"};
    CLI::Option* opt[10] = {};
    std::string values[10];

    void attach(CLI::App* cmd) {
        static constexpr const char* descs[10] = {
            "string length (<= 64)",     "recognition threshold in [0,1]",
            "consumer cost per step",    "producer cost per step",
            "initial producer count",    "consumer count",
            "producer starting capital", "consumer starting satisfaction",
            "simulation steps",          "RNG seed"};
        for (int i = 0; i < 10; ++i)
            opt[i] = cmd->add_option(std::string("--") + keys[i], values[i], descs[i]);
    }

    void apply(SimConfig& cfg) const {
        for (int i = 0; i < 10; ++i)
            if (opt[i]->count() > 0) io::apply_key(cfg, keys[i], values[i]);
    }
};

int cmd_lifetimes(int k, double theta, double a_c, double s0) {
    std::printf("d,gain,expected_lifetime\n");
    for (int d = 0; d <= k; ++d) {
        const int q = k - d;
        const double gain =
            q >= transaction_floor(k, theta) ? static_cast<double>(q) / k : 0.0;
        const double life = expected_lifetime(d, a_c, theta, k, s0);
        std::printf("%d,%s,%s\n", d, io::fmt_g6(gain).c_str(),
                    std::isinf(life) ? "inf" : io::fmt_g6(life).c_str());
    }
    return 0;
}

int cmd_regime(int k, const std::vector<double>& thetas, const std::vector<int>& nps) {
    std::printf("theta,N_p,basin_size,coverage_ratio,regime\n");
    for (double theta : thetas)
        for (int np : nps) {
            const auto est = regime_estimate(k, theta, np);
            std::printf("%s,%d,%llu,%s,%s\n", io::fmt_g6(theta).c_str(), np,
                        static_cast<unsigned long long>(basin_size(k, theta)),
                        io::fmt_g6(est.coverage_ratio).c_str(),
                        est.regime == Regime::competition ? "competition" : "niche");
        }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Producer/consumer co-evolution on the k-bit hypercube"};
    app.require_subcommand(1);

    auto* run_cmd =
        app.add_subcommand("run", "simulate one trajectory and write CSV outputs");
    std::string run_config, run_out = "out";
    bool run_parallel = false, run_track = false;
    int track_radius = 2, track_sites = 2, hist_stride = 100, log_every = 0;
    run_cmd->add_option("--config", run_config,
                        "key=value config file or run_meta.json manifest");
    ConfigFlags run_flags;
    run_flags.attach(run_cmd);
    run_cmd->add_option("--out", run_out, "output directory");
    auto* o_parallel = run_cmd->add_flag(
        "--parallel", run_parallel,
        "OpenMP match scan inside the run (pays off for large N_c x N_p)");
    auto* o_track = run_cmd->add_flag(
        "--track-basins", run_track,
        "record per-step occupancy of every initial producer basin plus random sites");
    auto* o_radius = run_cmd->add_option("--track-radius", track_radius,
                                         "tracked basin radius");
    auto* o_sites = run_cmd->add_option("--track-sites", track_sites,
                                        "number of random comparison sites");
    auto* o_stride = run_cmd->add_option(
        "--hist-stride", hist_stride,
        "steps between need-overlap histogram samples (0 = off)");
    auto* o_log = run_cmd->add_option("--log-every", log_every,
                                      "progress line every N steps");

    auto* sweep_cmd =
        app.add_subcommand("sweep", "ensemble averages over a parameter grid");
    std::string sweep_config, np_grid, ac_values, theta_values, seed_base;
    std::string sweep_out = "sweep_out";
    int n_seeds = 0;
    bool sweep_serial = false;
    sweep_cmd->add_option("--config", sweep_config, "sweep spec file");
    sweep_cmd->add_option("--np-grid", np_grid, "comma list of initial producer counts");
    sweep_cmd->add_option("--ac-values", ac_values, "comma list of consumer costs");
    sweep_cmd->add_option("--theta-values", theta_values, "comma list of thresholds");
    sweep_cmd->add_option("--seeds", n_seeds, "seeds per cell");
    sweep_cmd->add_option("--seed-base", seed_base, "base seed for cell derivation");
    sweep_cmd->add_option("--out", sweep_out, "output directory");
    sweep_cmd->add_flag("--serial", sweep_serial, "run seeds sequentially");

    auto* life_cmd = app.add_subcommand(
        "lifetimes", "analytic consumer lifetime vs distance to the only producer");
    int life_k = 10;
    double life_theta = 0.8, life_ac = 1.0, life_s0 = 5.0;
    life_cmd->add_option("--k", life_k, "string length");
    life_cmd->add_option("--theta", life_theta, "recognition threshold");
    life_cmd->add_option("--a_c", life_ac, "consumer cost per step");
    life_cmd->add_option("--S_0", life_s0, "starting satisfaction");

    auto* regime_cmd =
        app.add_subcommand("regime", "niche/competition estimate from basin coverage");
    int regime_k = 10;
    std::vector<double> regime_thetas = {0.8, 0.9, 1.0};
    std::vector<int> regime_nps = {10, 30, 100, 300, 1000};
    regime_cmd->add_option("--k", regime_k, "string length");
    regime_cmd->add_option("--theta-values", regime_thetas, "thresholds")
        ->delimiter(',');
    regime_cmd->add_option("--np-grid", regime_nps, "initial producer counts")
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            SimConfig cfg;
            RunOptions opts;
            if (!run_config.empty()) {
                io::LoadedRun loaded = io::parse_run_config(run_config);
                cfg = loaded.config;
                if (loaded.has_options) opts = loaded.options;  // manifest replay
            }
            run_flags.apply(cfg);
            validate(cfg);
            if (o_parallel->count())
                opts.backend = run_parallel ? kernels::Backend::openmp
                                            : kernels::Backend::serial;
            if (o_track->count()) opts.track_basins = run_track;
            if (o_radius->count()) opts.track_radius = track_radius;
            if (o_sites->count()) opts.track_random_sites = track_sites;
            if (o_stride->count()) opts.hist_stride = hist_stride;
            if (o_log->count()) opts.log_every = log_every;
            const Trajectory traj = run(cfg, opts);
            io::write_run_outputs(traj, cfg, opts, run_out);
            std::printf("run complete: %ld steps, %d surviving producers, outputs in %s\n",
                        cfg.steps,
                        static_cast<int>(traj.final_state.producers.size()),
                        run_out.c_str());
            return 0;
        }
        if (sweep_cmd->parsed()) {
            SweepSpec spec;
            if (!sweep_config.empty()) spec = io::parse_sweep_spec(sweep_config);
            if (!np_grid.empty()) io::apply_key(spec, "Np_grid", np_grid);
            if (!ac_values.empty()) io::apply_key(spec, "ac_values", ac_values);
            if (!theta_values.empty()) io::apply_key(spec, "theta_values", theta_values);
            if (n_seeds > 0) spec.n_seeds = n_seeds;
            if (!seed_base.empty()) io::apply_key(spec, "seed_base", seed_base);
            validate(spec);
            const auto records = run_sweep(
                spec, sweep_serial ? kernels::Backend::serial : kernels::Backend::openmp);
            io::write_sweep_outputs(records, spec, sweep_out);
            std::printf("sweep complete: %zu cells x %d seeds, outputs in %s\n",
                        records.size(), spec.n_seeds, sweep_out.c_str());
            return 0;
        }
        if (life_cmd->parsed()) return cmd_lifetimes(life_k, life_theta, life_ac, life_s0);
        if (regime_cmd->parsed()) return cmd_regime(regime_k, regime_thetas, regime_nps);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
