#pragma once

#include <Eigen/Core>
#include <vector>

#include "qtaylor/order_statistics.hpp"
#include "qtaylor/regress.hpp"
#include "qtaylor/skedastic.hpp"

namespace qtaylor {

/// Strictly increasing quantile indices inside (0,1).
class TauGrid {
public:
    explicit TauGrid(std::vector<double> values);

    /// {1/(m+1), 2/(m+1), ..., m/(m+1)}; m = 99 gives 0.01..0.99. Each value
    /// is a single correctly rounded division, never an accumulated sum.
    static TauGrid uniform(int m = 99);
    /// Values first, first+step, ... up to last (inclusive), e.g. "0.01:0.99:0.01".
    static TauGrid parse(const std::string& text);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

private:
    std::vector<double> values_;
};

/// Unit direction (d_pi, d_y) onto which the bivariate shock is projected.
struct DirectionWeights {
    double d_pi = 0;
    double d_y = 0;

    /// Both weights nonnegative: the projected shock is nondecreasing in each
    /// component, which the quantile/Euler interchange requires.
    bool monotone() const { return d_pi >= 0 && d_y >= 0; }
};

/// Empirical tau-quantile of w_pi*z_pi + w_y*z_y over the aligned shock pairs.
double shock_combination_quantile(const ShockPanel& shocks, double w_pi, double w_y, double tau);

/// The combined sample w_pi*z_pi + w_y*z_y, sorted ascending.
std::vector<double> sorted_combination(const ShockPanel& shocks, double w_pi, double w_y);

/// Direction proportional to (-alpha_pi_i, -lambda*alpha_y_i).
DirectionWeights direction_weights_location_shift(const LawOfMotion& law, double lambda);

/// Direction proportional to (-h_pi*alpha_pi_i, -lambda*h_y*alpha_y_i) at (pi, y).
DirectionWeights direction_weights_location_scale(const LawOfMotion& law,
                                                  const SkedasticModel& sked, double lambda,
                                                  double pi, double y);

/// Local random-coefficient representation of the conditional tau-quantile of
/// one equation at a given state:
///   Q_tau(a_{t+1} | x) = c0 + c_i*i + c_pi*pi + c_y*y,
/// with slopes alpha_b + dh/db * Q_tau(z_a) and the intercept chosen so the
/// linear form is exact at the evaluation state. Order (intercept, i, pi, y).
Eigen::Vector4d conditional_quantile_coefficients(const LawOfMotion& law,
                                                  const SkedasticModel& sked,
                                                  const ShockPanel& shocks, Equation eq,
                                                  double tau, double pi, double y, double i);

}  // namespace qtaylor
