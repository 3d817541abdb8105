#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bitmarket/config.hpp"
#include "bitmarket/engine.hpp"
#include "bitmarket/kernels.hpp"

namespace bitmarket {

// Final-step observables of one run, the quantities averaged across seeds.
struct FinalObservables {
    int survivors = 0;
    double mean_capital = 0.0;
    double mean_satisfaction = 0.0;
    std::optional<double> order_ratio;   // undefined when h[k/2] == 0
    double condensed_fraction_est = 0.0; // from mean satisfaction
    double exact_match_fraction = 0.0;   // measured directly
};

struct SeedStat {
    double mean = 0.0;
    double stddev = 0.0;  // population std (divisor n); 0 for a single seed
};

struct EnsembleRecord {
    // cell coordinates
    int n_producers = 0;
    double a_c = 0.0;
    double theta = 0.0;
    int n_seeds = 0;

    SeedStat survivors;
    SeedStat mean_capital;
    SeedStat mean_satisfaction;
    SeedStat order_ratio;  // over the seeds where it is defined
    int order_ratio_defined = 0;
    SeedStat condensed_fraction;
    SeedStat exact_match;
};

// Execution order of the seed loop; results are identical either way
// (each seed writes its own slot, reduction runs in fixed slot order).
enum class SeedOrder { forward, reversed };

FinalObservables final_observables(const Trajectory& traj, const SimConfig& cfg);

// Runs seeds seed_base .. seed_base + n_seeds - 1. Backend::openmp
// parallelises across seeds; each run itself stays serial.
std::vector<FinalObservables> run_seeds(
    const SimConfig& base, int n_seeds, std::uint64_t seed_base,
    kernels::Backend backend = kernels::Backend::openmp,
    SeedOrder order = SeedOrder::forward);

EnsembleRecord aggregate(int n_producers, double a_c, double theta,
                         std::span<const FinalObservables> finals);

EnsembleRecord run_ensemble(const SimConfig& base, int n_seeds,
                            std::uint64_t seed_base,
                            kernels::Backend backend = kernels::Backend::openmp);

// Seed base for one sweep cell: seed_base + FNV-1a over the cell coordinates
// (N_p as int64, a_c and theta as their IEEE-754 bit patterns). Keeps cells
// reproducible in isolation and in any execution order.
std::uint64_t cell_seed_base(std::uint64_t seed_base, int n_producers,
                             double a_c, double theta);

// One EnsembleRecord per (N_p, a_c, theta) cell, cells in row-major order
// of (np_grid, ac_values, theta_values).
std::vector<EnsembleRecord> run_sweep(
    const SweepSpec& spec, kernels::Backend backend = kernels::Backend::openmp);

}  // namespace bitmarket
