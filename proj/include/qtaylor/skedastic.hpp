#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "qtaylor/ingest.hpp"
#include "qtaylor/regress.hpp"

namespace qtaylor {

enum class SkedasticForm {
    linear_sqrt,  // h = sqrt(L)
    exp_sqrt,     // h = exp(sqrt(L))
};

enum class Equation { inflation, output_gap };

/// Linear index L = intercept + rate*i + inflation*pi + output_gap*y (+ dummies).
struct ScaleCoefficients {
    double intercept = 0;
    double rate = 0;
    double inflation = 0;
    double output_gap = 0;
    Eigen::VectorXd dummies;

    double linear(double pi, double y, double i) const {
        return intercept + rate * i + inflation * pi + output_gap * y;
    }
};

struct SkedasticModel {
    ScaleCoefficients pi_eq;
    ScaleCoefficients y_eq;
    SkedasticForm form = SkedasticForm::linear_sqrt;
    double floor = 1e-8;
    bool restrict_rate = true;  // gamma_{a,i} fixed at zero
    std::vector<std::string> dummy_names;

    OlsFit fit_pi;
    OlsFit fit_y;
    int floor_bindings = 0;  // sample states where the fitted index hit the floor

    const ScaleCoefficients& coefficients(Equation eq) const {
        return eq == Equation::inflation ? pi_eq : y_eq;
    }

    /// Constant scales sqrt(var_pi), sqrt(var_y) under the linear_sqrt form.
    static SkedasticModel constant(double var_pi, double var_y);
};

struct SkedasticOptions {
    SkedasticForm form = SkedasticForm::linear_sqrt;
    bool include_dummies = false;
    bool restrict_rate = true;
    double floor = 1e-8;
    // Squared residuals enter from this index on; one residual is dropped so
    // the sample matches the published row counts.
    Eigen::Index first_residual = 1;
};

/// Regress squared law-of-motion residuals on (1 [, i_t], pi_t, y_t [, dummies]).
SkedasticModel fit_skedastic(const LawOfMotion& law, const MacroPanel& panel,
                             const SkedasticOptions& options = {});

/// Scale with dummies switched off. Always >= sqrt(floor) (or exp of it).
double h_value(const SkedasticModel& model, Equation eq, double pi, double y, double i);

/// Scale including the dummy contribution for one panel row.
double h_value(const SkedasticModel& model, Equation eq, double pi, double y, double i,
               const Eigen::Ref<const Eigen::RowVectorXd>& dummy_row);

bool floor_binds(const SkedasticModel& model, Equation eq, double pi, double y, double i);

/// h and its partial derivatives. Throws NumericalError where the floor binds,
/// since the derivative is undefined at the kink.
struct ScaleGradient {
    double value = 0;
    double d_rate = 0;
    double d_inflation = 0;
    double d_output_gap = 0;
};
ScaleGradient h_gradient(const SkedasticModel& model, Equation eq, double pi, double y, double i);

/// Standardized shock pairs, kept aligned by quarter.
struct ShockPanel {
    Eigen::VectorXd z_pi;
    Eigen::VectorXd z_y;
    std::vector<Quarter> quarters;
    int floor_bindings = 0;

    Eigen::Index size() const { return z_pi.size(); }
};

/// z_{a,t+1} = u_{a,t+1} / h_a(state at t).
ShockPanel standardize_shocks(const LawOfMotion& law, const SkedasticModel& model,
                              const MacroPanel& panel);

/// Coefficient table in the published row order: pi, y, [i], dummies, constant.
void write_skedastic_table(std::ostream& out, const SkedasticModel& model);

}  // namespace qtaylor
