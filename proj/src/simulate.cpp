#include "qtaylor/simulate.hpp"

#include <Eigen/LU>
#include <cmath>
#include <random>

#include "qtaylor/errors.hpp"

namespace qtaylor {

namespace {

MacroPanel empty_panel(int T, Quarter start) {
    if (T < 1) throw std::invalid_argument("simulation length must be positive");
    MacroPanel p;
    p.pi.resize(T + 1);
    p.y.resize(T + 1);
    p.i.resize(T + 1);
    p.dummies.resize(T + 1, 0);
    Quarter q = start;
    for (int t = 0; t <= T; ++t, q = q.next()) p.quarters.push_back(q);
    return p;
}

}  // namespace

MacroPanel simulate_var_panel(const EquationCoefficients& pi_eq,
                              const EquationCoefficients& y_eq, const RateProcess& rate,
                              double scale_pi, double scale_y, int T, std::uint64_t seed,
                              Quarter start) {
    MacroPanel p = empty_panel(T, start);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double innovation = rate.sd * std::sqrt(1.0 - rate.persistence * rate.persistence);

    // Start (pi, y) at the deterministic fixed point for i = mean.
    Eigen::Matrix2d a;
    a << 1.0 - pi_eq.inflation, -pi_eq.output_gap, -y_eq.inflation, 1.0 - y_eq.output_gap;
    const Eigen::Vector2d c(pi_eq.intercept + pi_eq.rate * rate.mean,
                            y_eq.intercept + y_eq.rate * rate.mean);
    const Eigen::Vector2d fixed = a.partialPivLu().solve(c);
    p.pi[0] = fixed[0];
    p.y[0] = fixed[1];
    p.i[0] = rate.mean;
    for (int t = 0; t < T; ++t) {
        p.pi[t + 1] = pi_eq.mean(p.pi[t], p.y[t], p.i[t]) + scale_pi * normal(rng);
        p.y[t + 1] = y_eq.mean(p.pi[t], p.y[t], p.i[t]) + scale_y * normal(rng);
        p.i[t + 1] = rate.mean + rate.persistence * (p.i[t] - rate.mean) + innovation * normal(rng);
    }
    return p;
}

MacroPanel simulate_policy_path(const RuleContext& ctx, double tau0, PolicyState initial, int T,
                                std::uint64_t seed, Quarter start) {
    ctx.validate();
    MacroPanel p = empty_panel(T, start);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> draw(0, ctx.shocks.size() - 1);

    double i_prev = initial.i_prev;
    p.pi[0] = initial.pi;
    p.y[0] = initial.y;
    for (int t = 0; t <= T; ++t) {
        const PolicyState s{p.pi[t], p.y[t], i_prev};
        p.i[t] = optimal_rate(ctx, tau0, s);
        i_prev = p.i[t];
        if (t == T) break;
        double h_pi = 1, h_y = 1;
        if (ctx.rule_case != RuleCase::location_shift) {
            h_pi = h_value(*ctx.sked, Equation::inflation, s.pi, s.y, p.i[t]);
            h_y = h_value(*ctx.sked, Equation::output_gap, s.pi, s.y, p.i[t]);
        }
        const Eigen::Index k = draw(rng);
        p.pi[t + 1] = ctx.law.pi_eq.mean(s.pi, s.y, p.i[t]) + h_pi * ctx.shocks.z_pi[k];
        p.y[t + 1] = ctx.law.y_eq.mean(s.pi, s.y, p.i[t]) + h_y * ctx.shocks.z_y[k];
    }
    return p;
}

}  // namespace qtaylor
