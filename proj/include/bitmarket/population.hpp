#pragma once

#include <vector>

#include "bitmarket/bitstring.hpp"
#include "bitmarket/config.hpp"
#include "bitmarket/rng.hpp"

namespace bitmarket {

struct Consumer {
    BitString need;
    double satisfaction = 0.0;  // S_i; > 0 at every step boundary
    int lifetime_age = 0;       // steps survived since (re)birth
};

struct Producer {
    int id = 0;  // assigned at init, stable under removals
    BitString product;
    double capital = 0.0;  // C_j
    int customers_this_step = 0;
};

// Consumers are a fixed-size collection (dead ones are replaced in place);
// producers only ever shrink. The state owns the run's RNG stream.
struct MarketState {
    std::vector<Consumer> consumers;
    std::vector<Producer> producers;
    long t = 0;
    RandomSource rng{0};
};

// Fresh market: N_p producers with capital C_p, N_c consumers with
// satisfaction S_0, all strings uniform random. Draw order is fixed:
// every producer string in index order, then every consumer string in
// index order.
MarketState init_market(const SimConfig& cfg, RandomSource rng);

}  // namespace bitmarket
