#include "qtaylor/rule.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qtaylor/csv.hpp"
#include "qtaylor/errors.hpp"

namespace qtaylor {

void Calibration::validate() const {
    if (!(beta > 0.0 && beta < 1.0) && beta != 0.0) {
        throw ConfigError("calibration: beta must lie in (0,1)");
    }
    if (!(lambda > 0.0)) throw ConfigError("calibration: lambda must be positive");
    if (!(delta >= 0.0)) throw ConfigError("calibration: delta must be nonnegative");
    if (!std::isfinite(pi_star)) throw ConfigError("calibration: pi_star must be finite");
}

void RuleContext::validate() const {
    calib.validate();
    if (rule_case != RuleCase::location_shift && !sked) {
        throw ConfigError("rule case " + to_string(rule_case) + " requires a skedastic model");
    }
    if (shocks.size() == 0) throw DataError("rule context has no shocks");
}

namespace {

struct Scales {
    double h_pi = 1, h_y = 1;
    double dh_pi = 0, dh_y = 0;  // derivatives with respect to the rate
};

void require_no_rate_scale(const SkedasticModel& sked) {
    if (sked.pi_eq.rate != 0.0 || sked.y_eq.rate != 0.0) {
        throw ConfigError("location-scale rule requires gamma_i = 0 in both skedastic equations");
    }
}

const SkedasticModel& require_sked(const RuleContext& ctx) {
    if (!ctx.sked) throw ConfigError("rule case requires a skedastic model");
    return *ctx.sked;
}

// Coefficients multiplying pi and y, plus the constant, inside the
// mean-response bracket of the closed form.
struct Bracket {
    double on_pi, on_y, constant;
};

Bracket mean_response(const RuleContext& ctx) {
    const auto& a = ctx.law.pi_eq;
    const auto& b = ctx.law.y_eq;
    const double lam = ctx.calib.lambda;
    Bracket br{};
    if (ctx.grouping == Grouping::rederived) {
        br.on_pi = a.inflation * a.rate + lam * b.inflation * b.rate;
        br.on_y = a.output_gap * a.rate + lam * b.output_gap * b.rate;
    } else {
        br.on_pi = a.inflation * a.rate + b.inflation * b.rate;
        br.on_y = lam * (a.output_gap * a.rate + b.output_gap * b.rate);
    }
    br.constant = a.intercept * a.rate + lam * b.intercept * b.rate - a.rate * ctx.calib.pi_star;
    return br;
}

ClosedFormTerms terms_with_scales(const RuleContext& ctx, const PolicyState& s, double h_pi,
                                  double h_y) {
    const auto& a = ctx.law.pi_eq;
    const auto& b = ctx.law.y_eq;
    const auto& c = ctx.calib;
    const double reach = a.rate * a.rate + c.lambda * b.rate * b.rate;
    const double denom = c.delta + c.beta * reach;
    if (!(denom > 0.0)) throw NumericalError("Taylor rule denominator is zero");
    const Bracket br = mean_response(ctx);
    const double bracket = br.on_pi * s.pi + br.on_y * s.y + br.constant;

    // i* = i_prev + beta/D * (q - bracket - reach*i_prev); equivalent to
    // (delta*i_prev - beta*bracket + beta*q) / D, and exactly i_prev at beta = 0.
    ClosedFormTerms t;
    t.multiplier = c.beta / denom;
    t.base = s.i_prev + t.multiplier * (-bracket - reach * s.i_prev);
    t.w_pi = -h_pi * a.rate;
    t.w_y = -c.lambda * h_y * b.rate;
    return t;
}

ClosedFormTerms scaled_terms(const RuleContext& ctx, const PolicyState& s) {
    const auto& sked = require_sked(ctx);
    require_no_rate_scale(sked);
    return terms_with_scales(ctx, s, h_value(sked, Equation::inflation, s.pi, s.y, 0.0),
                             h_value(sked, Equation::output_gap, s.pi, s.y, 0.0));
}

Scales scales_at(const RuleContext& ctx, double i, const PolicyState& s) {
    Scales sc;
    switch (ctx.rule_case) {
        case RuleCase::location_shift:
            break;
        case RuleCase::location_scale_states: {
            const auto& sked = require_sked(ctx);
            require_no_rate_scale(sked);
            sc.h_pi = h_value(sked, Equation::inflation, s.pi, s.y, 0.0);
            sc.h_y = h_value(sked, Equation::output_gap, s.pi, s.y, 0.0);
            break;
        }
        case RuleCase::general: {
            const auto& sked = require_sked(ctx);
            const ScaleGradient gp = h_gradient(sked, Equation::inflation, s.pi, s.y, i);
            const ScaleGradient gy = h_gradient(sked, Equation::output_gap, s.pi, s.y, i);
            sc.h_pi = gp.value;
            sc.h_y = gy.value;
            sc.dh_pi = gp.d_rate;
            sc.dh_y = gy.d_rate;
            break;
        }
    }
    return sc;
}

}  // namespace

ClosedFormTerms closed_form_terms(const RuleContext& ctx, const PolicyState& s) {
    switch (ctx.rule_case) {
        case RuleCase::location_shift:
            return terms_with_scales(ctx, s, 1.0, 1.0);
        case RuleCase::location_scale_states:
            return scaled_terms(ctx, s);
        case RuleCase::general:
            break;
    }
    throw ConfigError("the general case has no closed-form rule");
}

double taylor_rule_location_shift(const RuleContext& ctx, double tau, const PolicyState& s) {
    const ClosedFormTerms t = terms_with_scales(ctx, s, 1.0, 1.0);
    return t.base + t.multiplier * shock_combination_quantile(ctx.shocks, t.w_pi, t.w_y, tau);
}

double taylor_rule_location_scale(const RuleContext& ctx, double tau, const PolicyState& s) {
    const ClosedFormTerms t = scaled_terms(ctx, s);
    return t.base + t.multiplier * shock_combination_quantile(ctx.shocks, t.w_pi, t.w_y, tau);
}

double euler_residual(const RuleContext& ctx, double i, double tau, const PolicyState& s) {
    const auto& a = ctx.law.pi_eq;
    const auto& b = ctx.law.y_eq;
    const auto& c = ctx.calib;
    const Scales sc = scales_at(ctx, i, s);
    const double m_pi = a.mean(s.pi, s.y, i);
    const double m_y = b.mean(s.pi, s.y, i);

    const Eigen::Index n = ctx.shocks.size();
    if (n == 0) throw DataError("rule context has no shocks");
    std::vector<double> inner(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const double zp = ctx.shocks.z_pi[k];
        const double zy = ctx.shocks.z_y[k];
        const double pi_next = m_pi + sc.h_pi * zp;
        const double y_next = m_y + sc.h_y * zy;
        inner[static_cast<std::size_t>(k)] = -(pi_next - c.pi_star) * (a.rate + sc.dh_pi * zp) -
                                             c.lambda * y_next * (b.rate + sc.dh_y * zy);
    }
    return -c.delta * (i - s.i_prev) + c.beta * quantile_in_place(std::span<double>(inner), tau);
}

bool euler_inner_monotone(const RuleContext& ctx, double i, const PolicyState& s) {
    const auto& a = ctx.law.pi_eq;
    const auto& b = ctx.law.y_eq;
    const auto& c = ctx.calib;
    const Scales sc = scales_at(ctx, i, s);
    const double m_pi = a.mean(s.pi, s.y, i);
    const double m_y = b.mean(s.pi, s.y, i);
    for (Eigen::Index k = 0; k < ctx.shocks.size(); ++k) {
        const double zp = ctx.shocks.z_pi[k];
        const double zy = ctx.shocks.z_y[k];
        const double d_pi =
            -sc.h_pi * (a.rate + sc.dh_pi * zp) - (m_pi + sc.h_pi * zp - c.pi_star) * sc.dh_pi;
        const double d_y =
            -c.lambda * (sc.h_y * (b.rate + sc.dh_y * zy) + (m_y + sc.h_y * zy) * sc.dh_y);
        if (d_pi < 0 || d_y < 0) return false;
    }
    return true;
}

EulerSolution solve_euler_numeric(const RuleContext& ctx, double tau, const PolicyState& s,
                                  std::optional<std::pair<double, double>> bracket,
                                  const BracketOptions& options) {
    const auto [lo, hi] = bracket.value_or(std::pair{s.i_prev - 25.0, s.i_prev + 25.0});
    auto f = [&](double i) { return euler_residual(ctx, i, tau, s); };
    const RootResult r = bisect_root(f, lo, hi, options);
    if (!r.converged) {
        throw NumericalError("Euler residual did not reach tolerance (|residual| = " +
                             format_number(std::abs(r.fx)) + " at i = " + format_number(r.x) +
                             ")");
    }
    EulerSolution sol;
    sol.rate = r.x;
    sol.residual = r.fx;
    sol.iterations = r.iterations;
    sol.multiple_roots = count_sign_changes(f, r.lo, r.hi) > 1;
    sol.monotone_inner = euler_inner_monotone(ctx, r.x, s);
    return sol;
}

double optimal_rate(const RuleContext& ctx, double tau, const PolicyState& s) {
    switch (ctx.rule_case) {
        case RuleCase::location_shift:
            return taylor_rule_location_shift(ctx, tau, s);
        case RuleCase::location_scale_states:
            return taylor_rule_location_scale(ctx, tau, s);
        case RuleCase::general:
            break;
    }
    return solve_euler_numeric(ctx, tau, s).rate;
}

Eigen::VectorXd rule_curve(const RuleContext& ctx, const std::vector<double>& taus,
                           const PolicyState& s) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(taus.size()));
    if (ctx.rule_case == RuleCase::general) {
        for (std::size_t k = 0; k < taus.size(); ++k) {
            out[static_cast<Eigen::Index>(k)] = solve_euler_numeric(ctx, taus[k], s).rate;
        }
        return out;
    }
    const ClosedFormTerms t = closed_form_terms(ctx, s);
    const std::vector<double> sorted = sorted_combination(ctx.shocks, t.w_pi, t.w_y);
    for (std::size_t k = 0; k < taus.size(); ++k) {
        out[static_cast<Eigen::Index>(k)] =
            t.base + t.multiplier * quantile_of_sorted(std::span<const double>(sorted), taus[k]);
    }
    return out;
}

ImpliedTauSeries implied_tau_series(const MacroPanel& panel, const RuleContext& ctx,
                                    const TauGrid& grid) {
    if (panel.size() < 2) throw DataError("implied tau needs at least two quarters");
    ctx.validate();
    ImpliedTauSeries out;
    out.grid = grid.values();
    for (Eigen::Index t = 1; t < panel.size(); ++t) {
        ImpliedTauRow row;
        row.quarter = panel.quarters[static_cast<std::size_t>(t)];
        row.i_observed = panel.i[t];
        row.state = {panel.pi[t], panel.y[t], panel.i[t - 1]};
        try {
            row.i_star = rule_curve(ctx, out.grid, row.state);
        } catch (const NumericalError& e) {
            row.valid = false;
            row.error = e.what();
            row.i_star = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.size()),
                                                   std::nan(""));
            row.tau_hat = std::nan("");
            row.fit_error = std::nan("");
            out.rows.push_back(std::move(row));
            continue;
        }
        const Eigen::ArrayXd err = (row.i_star.array() - row.i_observed).abs();
        row.fit_error = err.minCoeff();
        for (Eigen::Index k = 0; k < err.size(); ++k) {
            if (err[k] == row.fit_error) row.bracket.push_back(out.grid[static_cast<std::size_t>(k)]);
        }
        row.tau_hat = row.bracket.front();
        out.rows.push_back(std::move(row));
    }
    return out;
}

void write_implied_tau_csv(std::ostream& out, const ImpliedTauSeries& series) {
    CsvWriter w(out);
    std::vector<std::string> names{"quarter", "i_observed"};
    for (double tau : series.grid) names.push_back("i_star@" + format_number(tau));
    names.insert(names.end(), {"tau_hat", "fit_error", "n_minimizers", "valid"});
    w.header(names);
    for (const auto& r : series.rows) {
        w.field(r.quarter.to_string()).field(r.i_observed);
        for (Eigen::Index k = 0; k < r.i_star.size(); ++k) w.field(r.i_star[k]);
        w.field(r.tau_hat).field(r.fit_error).field(static_cast<int>(r.bracket.size()))
            .field(r.valid ? 1 : 0);
        w.end_row();
    }
}

void write_rule_csv(std::ostream& out, const MacroPanel& panel, const RuleContext& ctx,
                    const std::vector<double>& taus) {
    CsvWriter w(out);
    std::vector<std::string> names{"quarter", "i_observed"};
    for (double tau : taus) names.push_back("i_star@" + format_number(tau));
    w.header(names);
    for (Eigen::Index t = 1; t < panel.size(); ++t) {
        const PolicyState s{panel.pi[t], panel.y[t], panel.i[t - 1]};
        w.field(panel.quarters[static_cast<std::size_t>(t)].to_string()).field(panel.i[t]);
        Eigen::VectorXd curve;
        try {
            curve = rule_curve(ctx, taus, s);
        } catch (const NumericalError&) {
            curve = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(taus.size()), std::nan(""));
        }
        for (Eigen::Index k = 0; k < curve.size(); ++k) w.field(curve[k]);
        w.end_row();
    }
}

std::string to_string(RuleCase c) {
    switch (c) {
        case RuleCase::location_shift: return "location_shift";
        case RuleCase::location_scale_states: return "location_scale_states";
        case RuleCase::general: return "general";
    }
    return "unknown";
}

RuleCase parse_rule_case(const std::string& text) {
    if (text == "location_shift") return RuleCase::location_shift;
    if (text == "location_scale_states" || text == "location_scale") {
        return RuleCase::location_scale_states;
    }
    if (text == "general") return RuleCase::general;
    throw ConfigError("unknown rule case '" + text + "'");
}

}  // namespace qtaylor
