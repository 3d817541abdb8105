#include "bitmarket/config.hpp"

#include <stdexcept>
#include <string>

namespace bitmarket {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& bound) {
    throw std::invalid_argument(field + " must be " + bound);
}

}  // namespace

void validate(const SimConfig& cfg) {
    if (cfg.k < 1 || cfg.k > 64) fail("k", "in [1, 64]");
    if (!(cfg.theta >= 0.0 && cfg.theta <= 1.0)) fail("theta", "in [0, 1]");
    if (!(cfg.a_c >= 0.0)) fail("a_c", ">= 0");
    if (!(cfg.a_p >= 0.0)) fail("a_p", ">= 0");
    if (cfg.n_producers < 0) fail("N_p", ">= 0");
    if (cfg.n_consumers < 1) fail("N_c", ">= 1");
    if (!(cfg.producer_capital > 0.0)) fail("C_p", "> 0");
    if (!(cfg.initial_satisfaction > 0.0)) fail("S_0", "> 0");
    if (cfg.steps < 0) fail("steps", ">= 0");
}

void validate(const SweepSpec& spec) {
    validate(spec.base);
    if (spec.np_grid.empty()) fail("Np_grid", "non-empty");
    if (spec.ac_values.empty()) fail("ac_values", "non-empty");
    if (spec.theta_values.empty()) fail("theta_values", "non-empty");
    if (spec.n_seeds < 1) fail("n_seeds", ">= 1");
    for (int np : spec.np_grid)
        if (np < 0) fail("Np_grid entries", ">= 0");
    for (double ac : spec.ac_values)
        if (!(ac >= 0.0)) fail("ac_values entries", ">= 0");
    for (double th : spec.theta_values)
        if (!(th >= 0.0 && th <= 1.0)) fail("theta_values entries", "in [0, 1]");
}

}  // namespace bitmarket
