#pragma once

#include <cstdint>

#include "qtaylor/ingest.hpp"
#include "qtaylor/regress.hpp"
#include "qtaylor/rule.hpp"

namespace qtaylor {

/// Exogenous AR(1) policy rate used to simulate panels with a known law of
/// motion: i_{t+1} = mean + persistence*(i_t - mean) + sd*sqrt(1-persistence^2)*e.
struct RateProcess {
    double mean = 4.62;
    double persistence = 0.95;
    double sd = 3.5;  // unconditional standard deviation
};

/// Simulates T+1 quarters of (pi, y, i) from a law of motion with constant
/// scales and standard normal shocks. Dummy effects are ignored.
MacroPanel simulate_var_panel(const EquationCoefficients& pi_eq,
                              const EquationCoefficients& y_eq, const RateProcess& rate,
                              double scale_pi, double scale_y, int T, std::uint64_t seed,
                              Quarter start = {1900, 1});

/// Simulates T+1 quarters where the rate follows the tau0 rule of `ctx` and
/// (pi, y) follow the context's law of motion, with shock pairs drawn with
/// replacement from the context's shock panel and scaled by h at the state.
MacroPanel simulate_policy_path(const RuleContext& ctx, double tau0, PolicyState initial, int T,
                                std::uint64_t seed, Quarter start = {1900, 1});

}  // namespace qtaylor
