#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "qtaylor/calendar.hpp"
#include "qtaylor/ingest.hpp"

namespace qtaylor {

struct OlsFit {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd standard_errors;  // classical, homoskedastic
    Eigen::VectorXd residuals;
    double r_squared = 0;
    double adjusted_r_squared = 0;
    Eigen::Index n_obs = 0;
    std::vector<std::string> names;
};

/// Least squares via column-pivoted Householder QR. Throws NumericalError
/// naming the collinear columns when the design is rank deficient.
OlsFit ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
           std::vector<std::string> names = {});

/// Location part of one law-of-motion equation:
///   a_{t+1} = intercept + rate*i_t + inflation*pi_t + output_gap*y_t + dummies.d + h*z
struct EquationCoefficients {
    double intercept = 0;
    double rate = 0;
    double inflation = 0;
    double output_gap = 0;
    Eigen::VectorXd dummies;

    /// Conditional mean with every dummy switched off.
    double mean(double pi, double y, double i) const {
        return intercept + rate * i + inflation * pi + output_gap * y;
    }
};

/// Reduced-form VAR(1) for (pi, y) with the policy rate as an exogenous
/// regressor. Coefficient order everywhere: (intercept, i, pi, y, dummies...).
struct LawOfMotion {
    EquationCoefficients pi_eq;
    EquationCoefficients y_eq;
    std::vector<std::string> dummy_names;
    DummyTiming dummy_timing = DummyTiming::dependent;

    // Residuals dated t+1, aligned with residual_quarters.
    Eigen::VectorXd residuals_pi;
    Eigen::VectorXd residuals_y;
    std::vector<Quarter> residual_quarters;

    OlsFit fit_pi;
    OlsFit fit_y;
};

LawOfMotion fit_var1(const MacroPanel& panel, bool include_dummies,
                     DummyTiming timing = DummyTiming::dependent);

/// Design rows (1, i_t, pi_t, y_t [, dummies]) for t = 0..n-2.
Eigen::MatrixXd var1_design(const MacroPanel& panel, bool include_dummies, DummyTiming timing);

/// Coefficient table in the published row order: i, pi, y, constant, dummies,
/// then observations and fit statistics.
void write_var_table(std::ostream& out, const LawOfMotion& law);

}  // namespace qtaylor
