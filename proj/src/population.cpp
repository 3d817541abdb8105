#include "bitmarket/population.hpp"

namespace bitmarket {

MarketState init_market(const SimConfig& cfg, RandomSource rng) {
    MarketState state;
    state.producers.reserve(static_cast<std::size_t>(cfg.n_producers));
    for (int j = 0; j < cfg.n_producers; ++j)
        state.producers.push_back(
            Producer{j, random_string(rng, cfg.k), cfg.producer_capital, 0});
    state.consumers.reserve(static_cast<std::size_t>(cfg.n_consumers));
    for (int i = 0; i < cfg.n_consumers; ++i)
        state.consumers.push_back(
            Consumer{random_string(rng, cfg.k), cfg.initial_satisfaction, 0});
    state.t = 0;
    state.rng = rng;
    return state;
}

}  // namespace bitmarket
