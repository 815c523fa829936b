#include "qtaylor/qdp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qtaylor/csv.hpp"
#include "qtaylor/errors.hpp"
#include "qtaylor/order_statistics.hpp"

namespace qtaylor {

namespace {

bool sorted_strictly(const Eigen::VectorXd& g) {
    for (Eigen::Index k = 1; k < g.size(); ++k) {
        if (!(g[k - 1] < g[k])) return false;
    }
    return true;
}

// Locates x on a sorted grid: x ~ (1-w)*g[j] + w*g[j+1], clamped to the edges.
class GridLocator {
public:
    explicit GridLocator(const Eigen::VectorXd& g) : grid_(g), n_(g.size()) {
        const double step = (g[n_ - 1] - g[0]) / static_cast<double>(n_ - 1);
        uniform_ = true;
        for (Eigen::Index k = 1; k < n_; ++k) {
            if (std::abs(g[k] - g[k - 1] - step) > 1e-9 * std::max(1.0, std::abs(step))) {
                uniform_ = false;
                break;
            }
        }
        origin_ = g[0];
        inv_step_ = 1.0 / step;
    }

    void locate(double x, Eigen::Index& j, double& w) const {
        if (x <= grid_[0]) {
            j = 0;
            w = 0.0;
            return;
        }
        if (x >= grid_[n_ - 1]) {
            j = n_ - 2;
            w = 1.0;
            return;
        }
        if (uniform_) {
            j = std::min<Eigen::Index>(static_cast<Eigen::Index>((x - origin_) * inv_step_), n_ - 2);
        } else {
            const double* begin = grid_.data();
            j = std::upper_bound(begin, begin + n_, x) - begin - 1;
            j = std::clamp<Eigen::Index>(j, 0, n_ - 2);
        }
        w = (x - grid_[j]) / (grid_[j + 1] - grid_[j]);
        w = std::clamp(w, 0.0, 1.0);
    }

private:
    const Eigen::VectorXd& grid_;
    Eigen::Index n_;
    bool uniform_ = false;
    double origin_ = 0, inv_step_ = 0;
};

}  // namespace

void QdpProblem::validate() const {
    for (const auto* g : {&pi_grid, &y_grid, &i_grid}) {
        if (g->size() < 5) throw ConfigError("qdp grids need at least 5 points");
        if (!sorted_strictly(*g)) throw ConfigError("qdp grids must be strictly increasing");
    }
    if (shocks.size() == 0) throw ConfigError("qdp problem has no shock pairs");
    check_tau(tau);
    calib.validate();
    if (!(calib.beta < 1.0)) throw ConfigError("qdp requires beta < 1");
}

Eigen::VectorXd padded_grid(const Eigen::VectorXd& data, int points, double pad) {
    if (data.size() == 0) throw DataError("cannot build a grid from an empty series");
    return Eigen::VectorXd::LinSpaced(points, data.minCoeff() - pad, data.maxCoeff() + pad);
}

ValueFunction ValueFunction::zeros(const QdpProblem& problem) {
    ValueFunction v;
    v.n_pi = problem.pi_grid.size();
    v.n_y = problem.y_grid.size();
    v.n_i = problem.i_grid.size();
    v.values = Eigen::VectorXd::Zero(v.n_pi * v.n_y * v.n_i);
    v.policy.assign(static_cast<std::size_t>(v.values.size()), 0);
    return v;
}

ValueFunction quantile_bellman_update(const ValueFunction& v, const QdpProblem& problem) {
    const Eigen::Index n_pi = problem.pi_grid.size();
    const Eigen::Index n_y = problem.y_grid.size();
    const Eigen::Index n_i = problem.i_grid.size();
    if (v.n_pi != n_pi || v.n_y != n_y || v.n_i != n_i) {
        throw ConfigError("value function is not defined on the problem grids");
    }
    const auto& c = problem.calib;
    const auto& law = problem.law;
    const Eigen::Index n_s = problem.shocks.size();
    const std::size_t rank = quantile_rank(static_cast<std::size_t>(n_s), problem.tau) - 1;
    const GridLocator loc_pi(problem.pi_grid);
    const GridLocator loc_y(problem.y_grid);
    const Eigen::VectorXd& zp = problem.shocks.z_pi;
    const Eigen::VectorXd& zy = problem.shocks.z_y;

    // Continuation Q_tau[v(phi(pi, y, i, z'), i)] does not depend on i_prev.
    Eigen::VectorXd cont(n_pi * n_y * n_i);
    std::vector<double> scratch(static_cast<std::size_t>(n_s));
    std::vector<Eigen::Index> j_y(static_cast<std::size_t>(n_s));
    std::vector<double> w_y(static_cast<std::size_t>(n_s));
    for (Eigen::Index ia = 0; ia < n_i; ++ia) {
        const double i = problem.i_grid[ia];
        const double* slice = v.values.data() + n_pi * n_y * ia;
        for (Eigen::Index iy = 0; iy < n_y; ++iy) {
            for (Eigen::Index ip = 0; ip < n_pi; ++ip) {
                const double pi = problem.pi_grid[ip];
                const double y = problem.y_grid[iy];
                const double m_pi = law.pi_eq.mean(pi, y, i);
                const double m_y = law.y_eq.mean(pi, y, i);
                double h_pi = 1, h_y = 1;
                if (problem.sked) {
                    h_pi = h_value(*problem.sked, Equation::inflation, pi, y, i);
                    h_y = h_value(*problem.sked, Equation::output_gap, pi, y, i);
                }
                for (Eigen::Index k = 0; k < n_s; ++k) {
                    Eigen::Index jp, jy;
                    double wp, wy;
                    loc_pi.locate(m_pi + h_pi * zp[k], jp, wp);
                    loc_y.locate(m_y + h_y * zy[k], jy, wy);
                    const double* row0 = slice + n_pi * jy + jp;
                    const double* row1 = row0 + n_pi;
                    const double lo = (1 - wp) * row0[0] + wp * row0[1];
                    const double hi = (1 - wp) * row1[0] + wp * row1[1];
                    scratch[static_cast<std::size_t>(k)] = (1 - wy) * lo + wy * hi;
                }
                std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(rank),
                                 scratch.end());
                cont[ip + n_pi * (iy + n_y * ia)] = scratch[rank];
            }
        }
    }

    ValueFunction out = v;
    Eigen::MatrixXd smoothing(n_i, n_i);  // (action, i_prev)
    for (Eigen::Index ia = 0; ia < n_i; ++ia) {
        for (Eigen::Index im = 0; im < n_i; ++im) {
            const double d = problem.i_grid[ia] - problem.i_grid[im];
            smoothing(ia, im) = -0.5 * c.delta * d * d;
        }
    }
    for (Eigen::Index im = 0; im < n_i; ++im) {
        for (Eigen::Index iy = 0; iy < n_y; ++iy) {
            for (Eigen::Index ip = 0; ip < n_pi; ++ip) {
                const double pi = problem.pi_grid[ip];
                const double y = problem.y_grid[iy];
                const double gap = pi - c.pi_star;
                const double static_part = -0.5 * gap * gap - 0.5 * c.lambda * y * y;
                double best = -std::numeric_limits<double>::infinity();
                int arg = 0;
                for (Eigen::Index ia = 0; ia < n_i; ++ia) {
                    const double u = problem.utility
                                         ? problem.utility(pi, y, problem.i_grid[ia],
                                                           problem.i_grid[im])
                                         : smoothing(ia, im);
                    const double val = u + c.beta * cont[ip + n_pi * (iy + n_y * ia)];
                    if (val > best) {
                        best = val;
                        arg = static_cast<int>(ia);
                    }
                }
                const Eigen::Index idx = out.index(ip, iy, im);
                out.values[idx] = problem.utility ? best : static_part + best;
                out.policy[static_cast<std::size_t>(idx)] = arg;
            }
        }
    }
    return out;
}

ValueFunction solve_value_iteration(const QdpProblem& problem, const IterationOptions& options) {
    problem.validate();
    ValueFunction v = ValueFunction::zeros(problem);
    const double beta = problem.calib.beta;
    for (int it = 1; it <= options.max_iter; ++it) {
        ValueFunction next = quantile_bellman_update(v, problem);
        const Eigen::ArrayXd diff = (next.values - v.values).array();
        const double sup = diff.abs().maxCoeff();
        next.iterations = it;
        next.change_history = std::move(v.change_history);
        next.change_history.push_back(sup);
        next.last_change = sup;
        v = std::move(next);

        if (options.stopping == StoppingRule::sup_norm && sup < options.tol) return v;
        if (options.stopping == StoppingRule::span) {
            const double lo = diff.minCoeff(), hi = diff.maxCoeff();
            if (hi - lo < options.tol) {
                v.values.array() += beta / (1.0 - beta) * 0.5 * (lo + hi);
                return v;
            }
        }
    }
    throw ConvergenceError("value iteration did not converge in " +
                               std::to_string(options.max_iter) + " iterations (last change " +
                               format_number(v.last_change) + ")",
                           v);
}

ValueFunction solve_value_iteration(const QdpProblem& problem, double tol, int max_iter) {
    return solve_value_iteration(problem, IterationOptions{tol, max_iter, StoppingRule::sup_norm});
}

PolicyDeviation compare_policy(const ValueFunction& vf, const QdpProblem& problem,
                               const std::function<double(const PolicyState&)>& rule,
                               int interior_margin) {
    if (vf.n_pi != problem.pi_grid.size() || vf.n_y != problem.y_grid.size() ||
        vf.n_i != problem.i_grid.size()) {
        throw ConfigError("value function does not match the problem grids");
    }
    const Eigen::Index m = interior_margin;
    const double step = (problem.i_grid[vf.n_i - 1] - problem.i_grid[0]) /
                        static_cast<double>(vf.n_i - 1);
    PolicyDeviation d;
    double total = 0;
    for (Eigen::Index im = m; im < vf.n_i - m; ++im) {
        for (Eigen::Index iy = m; iy < vf.n_y - m; ++iy) {
            for (Eigen::Index ip = m; ip < vf.n_pi - m; ++ip) {
                const PolicyState s{problem.pi_grid[ip], problem.y_grid[iy], problem.i_grid[im]};
                const double dp = problem.i_grid[vf.action(ip, iy, im)];
                const double dev = std::abs(dp - rule(s));
                total += dev;
                ++d.n_states;
                if (dev > d.max_abs || d.n_states == 1) {
                    d.max_abs = dev;
                    d.worst = s;
                }
            }
        }
    }
    if (d.n_states == 0) throw ConfigError("interior margin leaves no states to compare");
    d.mean_abs = total / static_cast<double>(d.n_states);
    d.max_steps = d.max_abs / step;
    return d;
}

PolicyDeviation compare_policy_to_closed_form(const ValueFunction& vf, const QdpProblem& problem,
                                              const RuleContext& ctx, int interior_margin) {
    const auto& a = ctx.calib;
    const auto& b = problem.calib;
    if (a.beta != b.beta || a.lambda != b.lambda || a.delta != b.delta || a.pi_star != b.pi_star) {
        throw ConfigError("rule context and qdp problem use different calibrations");
    }
    auto same = [](const EquationCoefficients& x, const EquationCoefficients& y) {
        return x.intercept == y.intercept && x.rate == y.rate && x.inflation == y.inflation &&
               x.output_gap == y.output_gap;
    };
    if (!same(ctx.law.pi_eq, problem.law.pi_eq) || !same(ctx.law.y_eq, problem.law.y_eq)) {
        throw ConfigError("rule context and qdp problem use different laws of motion");
    }
    const double tau = problem.tau;
    return compare_policy(
        vf, problem, [&](const PolicyState& s) { return optimal_rate(ctx, tau, s); },
        interior_margin);
}

void write_value_slice_csv(std::ostream& out, const ValueFunction& vf, const QdpProblem& problem,
                           Eigen::Index i_prev_index) {
    if (i_prev_index < 0 || i_prev_index >= vf.n_i) {
        throw ConfigError("i_prev index out of range");
    }
    CsvWriter w(out);
    w.header({"pi", "y", "i_prev", "value", "policy_rate"});
    for (Eigen::Index iy = 0; iy < vf.n_y; ++iy) {
        for (Eigen::Index ip = 0; ip < vf.n_pi; ++ip) {
            w.field(problem.pi_grid[ip]).field(problem.y_grid[iy])
                .field(problem.i_grid[i_prev_index])
                .field(vf.value(ip, iy, i_prev_index))
                .field(problem.i_grid[vf.action(ip, iy, i_prev_index)]);
            w.end_row();
        }
    }
}

}  // namespace qtaylor
