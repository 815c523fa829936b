#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qtaylor/ingest.hpp"
#include "qtaylor/quantile.hpp"
#include "qtaylor/regress.hpp"
#include "qtaylor/root_finding.hpp"
#include "qtaylor/skedastic.hpp"

namespace qtaylor {

/// Loss u = -(pi - pi_star)^2/2 - lambda*y^2/2 - delta*(i - i_prev)^2/2,
/// discounted at beta. The output-gap target is fixed at zero.
struct Calibration {
    double beta = 0.99;
    double lambda = 1.0;
    double delta = 0.1;
    double pi_star = 0.496;

    void validate() const;
};

enum class RuleCase {
    location_shift,         // constant scale: shocks enter unscaled
    location_scale_states,  // h depends on (pi, y) only
    general,                // h also depends on i; solved numerically
};

/// How lambda groups the products of law-of-motion coefficients in the
/// closed form. `rederived` differentiates the loss directly; `printed`
/// reproduces the grouping of the published formula.
enum class Grouping { rederived, printed };

struct RuleContext {
    LawOfMotion law;
    std::optional<SkedasticModel> sked;
    ShockPanel shocks;
    Calibration calib;
    RuleCase rule_case = RuleCase::location_scale_states;
    Grouping grouping = Grouping::rederived;

    void validate() const;
};

/// Quarter-t information the rule conditions on.
struct PolicyState {
    double pi = 0;
    double y = 0;
    double i_prev = 0;
};

/// Closed-form rule decomposed as i*_tau = base + multiplier * Q_tau(w_pi z_pi + w_y z_y).
struct ClosedFormTerms {
    double base = 0;
    double multiplier = 0;  // beta / (delta + beta*(a_pi_i^2 + lambda*a_y_i^2)) > 0
    double w_pi = 0;
    double w_y = 0;
};

ClosedFormTerms closed_form_terms(const RuleContext& ctx, const PolicyState& s);

double taylor_rule_location_shift(const RuleContext& ctx, double tau, const PolicyState& s);
double taylor_rule_location_scale(const RuleContext& ctx, double tau, const PolicyState& s);

/// Left side of the quantile Euler equation at candidate rate i, evaluated by
/// enumerating the inner expression over every shock pair and taking its
/// empirical quantile. Covers all three cases; in the general case the scale
/// and its rate derivative are evaluated at (pi, y, i).
double euler_residual(const RuleContext& ctx, double i, double tau, const PolicyState& s);

struct EulerSolution {
    double rate = 0;
    double residual = 0;
    int iterations = 0;
    bool monotone_inner = true;   // quantile/Euler interchange valid at the root
    bool multiple_roots = false;  // more than one sign change on the bracket
};

/// Root of euler_residual by bisection. The default bracket is
/// [i_prev - 25, i_prev + 25], expanded up to the BracketOptions limit.
EulerSolution solve_euler_numeric(const RuleContext& ctx, double tau, const PolicyState& s,
                                  std::optional<std::pair<double, double>> bracket = {},
                                  const BracketOptions& options = {});

/// Whether the Euler inner expression is nondecreasing in both shock
/// components across the shock sample at rate i.
bool euler_inner_monotone(const RuleContext& ctx, double i, const PolicyState& s);

/// Optimal rate under the context's case (closed form or numeric root).
double optimal_rate(const RuleContext& ctx, double tau, const PolicyState& s);

/// Optimal rate for every tau of the grid at one state.
Eigen::VectorXd rule_curve(const RuleContext& ctx, const std::vector<double>& taus,
                           const PolicyState& s);

struct ImpliedTauRow {
    Quarter quarter;
    double i_observed = 0;
    PolicyState state;
    Eigen::VectorXd i_star;  // one per grid value
    double tau_hat = 0;
    double fit_error = 0;
    std::vector<double> bracket;  // every minimizing tau
    bool valid = true;
    std::string error;
};

struct ImpliedTauSeries {
    std::vector<double> grid;
    std::vector<ImpliedTauRow> rows;
};

/// tau_hat_t = argmin over the grid of |i_t - i*_tau(pi_t, y_t, i_{t-1})|,
/// smallest tau on ties, for every quarter t >= 1 of the panel.
ImpliedTauSeries implied_tau_series(const MacroPanel& panel, const RuleContext& ctx,
                                    const TauGrid& grid);

/// quarter, i_observed, i_star@tau..., tau_hat, fit_error (and a validity flag).
void write_implied_tau_csv(std::ostream& out, const ImpliedTauSeries& series);

/// Compact rule table at a few representative quantile indices.
void write_rule_csv(std::ostream& out, const MacroPanel& panel, const RuleContext& ctx,
                    const std::vector<double>& taus);

std::string to_string(RuleCase c);
RuleCase parse_rule_case(const std::string& text);

}  // namespace qtaylor
