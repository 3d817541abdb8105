#include <doctest.h>

#include "bitmarket/population.hpp"

using namespace bitmarket;

namespace {

SimConfig paper_config() {
    SimConfig cfg;  // defaults are already the reference set
    return cfg;
}

}  // namespace

TEST_CASE("init_market: endowments and sizes") {
    SimConfig cfg = paper_config();
    const MarketState st = init_market(cfg, RandomSource(cfg.seed));
    REQUIRE(st.producers.size() == 30);
    REQUIRE(st.consumers.size() == 1000);
    CHECK(st.t == 0);
    for (std::size_t j = 0; j < st.producers.size(); ++j) {
        CHECK(st.producers[j].id == static_cast<int>(j));
        CHECK(st.producers[j].capital == 200.0);
        CHECK(st.producers[j].product.k() == 10);
    }
    for (const Consumer& c : st.consumers) {
        CHECK(c.satisfaction == 5.0);
        CHECK(c.lifetime_age == 0);
        CHECK(c.need.k() == 10);
    }
}

TEST_CASE("init_market: zero producers is a valid market") {
    SimConfig cfg = paper_config();
    cfg.n_producers = 0;
    const MarketState st = init_market(cfg, RandomSource(1));
    CHECK(st.producers.empty());
    CHECK(st.consumers.size() == 1000);
}

TEST_CASE("init_market: same seed gives an identical market") {
    SimConfig cfg = paper_config();
    const MarketState a = init_market(cfg, RandomSource(99));
    const MarketState b = init_market(cfg, RandomSource(99));
    REQUIRE(a.producers.size() == b.producers.size());
    REQUIRE(a.consumers.size() == b.consumers.size());
    for (std::size_t j = 0; j < a.producers.size(); ++j)
        CHECK(a.producers[j].product == b.producers[j].product);
    for (std::size_t i = 0; i < a.consumers.size(); ++i)
        CHECK(a.consumers[i].need == b.consumers[i].need);
    CHECK(a.rng == b.rng);
}

TEST_CASE("init_market: documented draw order, producers then consumers") {
    SimConfig cfg = paper_config();
    cfg.n_producers = 3;
    cfg.n_consumers = 5;
    cfg.seed = 1234;
    const MarketState st = init_market(cfg, RandomSource(cfg.seed));

    // replay the contract by hand: one draw per string, producers first
    RandomSource replay(cfg.seed);
    for (int j = 0; j < 3; ++j)
        CHECK(st.producers[j].product == random_string(replay, cfg.k));
    for (int i = 0; i < 5; ++i)
        CHECK(st.consumers[i].need == random_string(replay, cfg.k));
}
