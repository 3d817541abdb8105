#pragma once

#include <cstdint>
#include <vector>

namespace bitmarket {

// Model parameters plus run controls. Defaults are the reference set used
// for most experiments: k=10, theta=0.9, a_c=1, a_p=4.5, N_p=30, N_c=1000,
// C_p=200, S_0=5, 2000 steps.
struct SimConfig {
    int k = 10;                         // string length, <= 64
    double theta = 0.9;                 // recognition threshold on q/k
    double a_c = 1.0;                   // consumer cost per step
    double a_p = 4.5;                   // producer cost per step
    int n_producers = 30;               // N_p, initial producer count
    int n_consumers = 1000;             // N_c, constant consumer count
    double producer_capital = 200.0;    // C_p, producer endowment
    double initial_satisfaction = 5.0;  // S_0, consumer endowment at (re)birth
    long steps = 2000;
    std::uint64_t seed = 0;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

// Throws std::invalid_argument naming the offending field and its bound.
void validate(const SimConfig& cfg);

// Cartesian sweep over initial producer counts, consumer costs and
// thresholds, each cell averaged over n_seeds independent runs.
struct SweepSpec {
    SimConfig base;
    std::vector<int> np_grid = {10, 30, 100, 300, 1000};  // log-spaced axis
    std::vector<double> ac_values = {1.0};
    std::vector<double> theta_values = {0.9};
    int n_seeds = 100;
    std::uint64_t seed_base = 0;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

void validate(const SweepSpec& spec);

}  // namespace bitmarket
