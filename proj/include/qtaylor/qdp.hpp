#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "qtaylor/regress.hpp"
#include "qtaylor/rule.hpp"
#include "qtaylor/skedastic.hpp"

namespace qtaylor {

/// Discretized quantile dynamic program. The state is (pi, y, i_prev); the
/// action set is the full rate grid, which doubles as the i_prev grid.
struct QdpProblem {
    Eigen::VectorXd pi_grid;
    Eigen::VectorXd y_grid;
    Eigen::VectorXd i_grid;
    ShockPanel shocks;
    Calibration calib;
    LawOfMotion law;
    std::optional<SkedasticModel> sked;  // absent: shocks enter unscaled
    double tau = 0.5;

    /// Replaces the quadratic period utility u(pi, y, i, i_prev) when set.
    std::function<double(double, double, double, double)> utility;

    void validate() const;
};

/// `points` equally spaced values over [min(data) - pad, max(data) + pad].
Eigen::VectorXd padded_grid(const Eigen::VectorXd& data, int points = 41, double pad = 1.0);

struct ValueFunction {
    Eigen::Index n_pi = 0, n_y = 0, n_i = 0;
    Eigen::VectorXd values;    // v(pi, y, i_prev)
    std::vector<int> policy;   // argmax index into i_grid
    int iterations = 0;
    double last_change = std::numeric_limits<double>::infinity();
    std::vector<double> change_history;  // sup-norm change per iteration

    Eigen::Index index(Eigen::Index ip, Eigen::Index iy, Eigen::Index im) const {
        return ip + n_pi * (iy + n_y * im);
    }
    double value(Eigen::Index ip, Eigen::Index iy, Eigen::Index im) const {
        return values[index(ip, iy, im)];
    }
    int action(Eigen::Index ip, Eigen::Index iy, Eigen::Index im) const {
        return policy[static_cast<std::size_t>(index(ip, iy, im))];
    }

    static ValueFunction zeros(const QdpProblem& problem);
};

/// One application of
///   v(x) = max_i { u(x, i) + beta * Q_tau[ v(phi(x, i, z')) ] }
/// with bilinear interpolation in (pi, y) clamped at the grid edges and the
/// empirical tau-quantile over the shock pairs. Ties go to the lowest rate.
ValueFunction quantile_bellman_update(const ValueFunction& v, const QdpProblem& problem);

enum class StoppingRule {
    sup_norm,  // max |v_{n+1} - v_n| < tol
    span,      // max - min of (v_{n+1} - v_n) < tol; values then shifted to the
               // midpoint of the MacQueen-Porteus bounds
};

struct IterationOptions {
    double tol = 1e-6;
    int max_iter = 5000;
    StoppingRule stopping = StoppingRule::sup_norm;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, ValueFunction last)
        : NumericalError(what), last_iterate(std::move(last)) {}
    ValueFunction last_iterate;
};

ValueFunction solve_value_iteration(const QdpProblem& problem, const IterationOptions& options);
ValueFunction solve_value_iteration(const QdpProblem& problem, double tol, int max_iter);

struct PolicyDeviation {
    double max_abs = 0;
    double mean_abs = 0;
    double max_steps = 0;  // max_abs in units of the rate-grid step
    Eigen::Index n_states = 0;
    PolicyState worst;
};

/// Deviation of the greedy policy from `rule` over interior states, skipping
/// `interior_margin` cells at each edge of every state dimension.
PolicyDeviation compare_policy(const ValueFunction& vf, const QdpProblem& problem,
                               const std::function<double(const PolicyState&)>& rule,
                               int interior_margin);

/// Same, against the closed-form (or numeric) rule of `ctx` at problem.tau.
/// Throws ConfigError when the context's calibration or law differ from the
/// problem's.
PolicyDeviation compare_policy_to_closed_form(const ValueFunction& vf, const QdpProblem& problem,
                                              const RuleContext& ctx, int interior_margin);

/// Slice of value and policy at one i_prev index: pi, y, value, policy_rate.
void write_value_slice_csv(std::ostream& out, const ValueFunction& vf, const QdpProblem& problem,
                           Eigen::Index i_prev_index);

}  // namespace qtaylor
