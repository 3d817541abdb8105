#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bitmarket/config.hpp"
#include "bitmarket/engine.hpp"
#include "bitmarket/ensemble.hpp"

namespace bitmarket::io {

// Flat key=value text ('#' comments, blank lines ignored) or a run_meta.json
// manifest produced by write_run_outputs; the two are distinguished by the
// leading '{'. Unknown keys are errors, never silently ignored.
//
// key=value keys: k, theta, a_c, a_p, N_p, N_c, C_p, S_0, steps, seed.
// Sweep files additionally: Np_grid, ac_values, theta_values (comma lists),
// n_seeds, seed_base.

struct LoadedRun {
    SimConfig config;
    RunOptions options;   // manifest only; defaults otherwise
    bool has_options = false;
};

LoadedRun parse_run_config(const std::filesystem::path& path);
SweepSpec parse_sweep_spec(const std::filesystem::path& path);

// Applies one key=value pair; same key set as the config file.
void apply_key(SimConfig& cfg, const std::string& key, const std::string& value);
void apply_key(SweepSpec& spec, const std::string& key, const std::string& value);

// Round-trip-exact emission (17 significant digits for reals).
std::string to_key_value(const SimConfig& cfg);
std::string to_key_value(const SweepSpec& spec);

std::string manifest_json(const SimConfig& cfg, const RunOptions& opts);

// Data files use fixed "%.6g" formatting, which together with the seeded RNG
// makes replays byte-identical.
std::string fmt_g6(double v);

// Writes timeseries.csv, producers_final.csv, consumers_summary.csv,
// need_overlap_hist.csv, producer_distance_hist.csv, occupancy.csv (only
// when tracking was enabled) and run_meta.json under out_dir, creating it
// if needed. I/O failures carry the offending path.
void write_run_outputs(const Trajectory& traj, const SimConfig& cfg,
                       const RunOptions& opts,
                       const std::filesystem::path& out_dir);

// Writes sweep.csv and sweep_meta.json under out_dir.
void write_sweep_outputs(const std::vector<EnsembleRecord>& records,
                         const SweepSpec& spec,
                         const std::filesystem::path& out_dir);

}  // namespace bitmarket::io
