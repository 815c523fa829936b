#include "qtaylor/skedastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "qtaylor/csv.hpp"
#include "qtaylor/errors.hpp"

namespace qtaylor {

namespace {

double scale_from_index(SkedasticForm form, double index, double floor) {
    const double root = std::sqrt(std::max(index, floor));
    return form == SkedasticForm::linear_sqrt ? root : std::exp(root);
}

double dummy_term(const ScaleCoefficients& c, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    if (c.dummies.size() == 0) return 0.0;
    if (row.size() != c.dummies.size()) {
        throw std::invalid_argument("h_value: dummy row does not match the skedastic model");
    }
    return row.dot(c.dummies.transpose());
}

}  // namespace

SkedasticModel SkedasticModel::constant(double var_pi, double var_y) {
    SkedasticModel m;
    m.pi_eq.intercept = var_pi;
    m.y_eq.intercept = var_y;
    return m;
}

SkedasticModel fit_skedastic(const LawOfMotion& law, const MacroPanel& panel,
                             const SkedasticOptions& options) {
    const Eigen::Index n_res = law.residuals_pi.size();
    if (n_res == 0 || law.residuals_y.size() != n_res) {
        throw DataError("fit_skedastic: law-of-motion residuals unavailable");
    }
    if (n_res != panel.size() - 1) {
        throw DataError("fit_skedastic: law of motion was not fitted on this panel");
    }
    const Eigen::Index start = options.first_residual;
    const Eigen::Index n = n_res - start;
    const bool dummies = options.include_dummies && panel.dummies.cols() > 0;
    const Eigen::Index d = dummies ? panel.dummies.cols() : 0;
    const Eigen::Index k = (options.restrict_rate ? 3 : 4) + d;

    // Row r uses the residual dated t+1 with t = start + r and the state at t.
    Eigen::MatrixXd x(n, k);
    std::vector<std::string> names{"const"};
    Eigen::Index c = 0;
    x.col(c++).setOnes();
    if (!options.restrict_rate) {
        x.col(c++) = panel.i.segment(start, n);
        names.push_back("i");
    }
    x.col(c++) = panel.pi.segment(start, n);
    x.col(c++) = panel.y.segment(start, n);
    names.push_back("pi");
    names.push_back("y");
    if (dummies) {
        x.rightCols(d) = law.dummy_timing == DummyTiming::dependent
                             ? panel.dummies.middleRows(start + 1, n)
                             : panel.dummies.middleRows(start, n);
        names.insert(names.end(), panel.dummy_names.begin(), panel.dummy_names.end());
    }

    SkedasticModel m;
    m.form = options.form;
    m.floor = options.floor;
    m.restrict_rate = options.restrict_rate;
    if (dummies) m.dummy_names = panel.dummy_names;
    m.fit_pi = ols(x, law.residuals_pi.segment(start, n).array().square().matrix(), names);
    m.fit_y = ols(x, law.residuals_y.segment(start, n).array().square().matrix(), names);

    auto unpack = [&](const Eigen::VectorXd& b) {
        ScaleCoefficients s;
        Eigen::Index j = 0;
        s.intercept = b[j++];
        if (!options.restrict_rate) s.rate = b[j++];
        s.inflation = b[j++];
        s.output_gap = b[j++];
        s.dummies = b.tail(d);
        return s;
    };
    m.pi_eq = unpack(m.fit_pi.coefficients);
    m.y_eq = unpack(m.fit_y.coefficients);

    const Eigen::VectorXd fitted_pi = x * m.fit_pi.coefficients;
    const Eigen::VectorXd fitted_y = x * m.fit_y.coefficients;
    m.floor_bindings = static_cast<int>((fitted_pi.array() <= m.floor).count() +
                                        (fitted_y.array() <= m.floor).count());
    return m;
}

double h_value(const SkedasticModel& model, Equation eq, double pi, double y, double i) {
    return scale_from_index(model.form, model.coefficients(eq).linear(pi, y, i), model.floor);
}

double h_value(const SkedasticModel& model, Equation eq, double pi, double y, double i,
               const Eigen::Ref<const Eigen::RowVectorXd>& dummy_row) {
    const auto& c = model.coefficients(eq);
    return scale_from_index(model.form, c.linear(pi, y, i) + dummy_term(c, dummy_row),
                            model.floor);
}

bool floor_binds(const SkedasticModel& model, Equation eq, double pi, double y, double i) {
    return model.coefficients(eq).linear(pi, y, i) <= model.floor;
}

ScaleGradient h_gradient(const SkedasticModel& model, Equation eq, double pi, double y,
                         double i) {
    const auto& c = model.coefficients(eq);
    const double index = c.linear(pi, y, i);
    if (index <= model.floor) {
        throw NumericalError("skedastic floor binds at (pi=" + format_number(pi) +
                             ", y=" + format_number(y) + ", i=" + format_number(i) +
                             "); scale derivative undefined");
    }
    const double root = std::sqrt(index);
    ScaleGradient g;
    g.value = model.form == SkedasticForm::linear_sqrt ? root : std::exp(root);
    // d sqrt(L) = dL / (2 sqrt(L)); the exp form picks up a factor h.
    const double chain = model.form == SkedasticForm::linear_sqrt ? 1.0 / (2.0 * root)
                                                                  : g.value / (2.0 * root);
    g.d_rate = c.rate * chain;
    g.d_inflation = c.inflation * chain;
    g.d_output_gap = c.output_gap * chain;
    return g;
}

ShockPanel standardize_shocks(const LawOfMotion& law, const SkedasticModel& model,
                              const MacroPanel& panel) {
    const Eigen::Index n = law.residuals_pi.size();
    if (n != panel.size() - 1) {
        throw DataError("standardize_shocks: law of motion was not fitted on this panel");
    }
    const bool dummies = !model.dummy_names.empty();
    const Eigen::Index d = dummies ? panel.dummies.cols() : 0;
    const Eigen::RowVectorXd none(0);

    ShockPanel out;
    out.z_pi.resize(n);
    out.z_y.resize(n);
    out.quarters = law.residual_quarters;
    for (Eigen::Index t = 0; t < n; ++t) {
        const double pi = panel.pi[t], y = panel.y[t], i = panel.i[t];
        const Eigen::Index drow = law.dummy_timing == DummyTiming::dependent ? t + 1 : t;
        const Eigen::RowVectorXd row = dummies ? panel.dummies.row(drow) : none;
        for (Equation eq : {Equation::inflation, Equation::output_gap}) {
            const auto& c = model.coefficients(eq);
            const double dterm = d > 0 ? row.dot(c.dummies.transpose()) : 0.0;
            if (c.linear(pi, y, i) + dterm <= model.floor) ++out.floor_bindings;
        }
        const double h_pi = h_value(model, Equation::inflation, pi, y, i, row);
        const double h_y = h_value(model, Equation::output_gap, pi, y, i, row);
        out.z_pi[t] = law.residuals_pi[t] / h_pi;
        out.z_y[t] = law.residuals_y[t] / h_y;
    }
    return out;
}

void write_skedastic_table(std::ostream& out, const SkedasticModel& model) {
    CsvWriter w(out);
    w.header({"term", "u2_pi", "u2_pi_se", "u2_y", "u2_y_se"});
    const auto& names = model.fit_pi.names;
    auto index_of = [&](const std::string& name) {
        return static_cast<Eigen::Index>(std::find(names.begin(), names.end(), name) -
                                         names.begin());
    };
    auto row = [&](const std::string& term, const std::string& name) {
        const Eigen::Index c = index_of(name);
        w.field(term)
            .field(model.fit_pi.coefficients[c])
            .field(model.fit_pi.standard_errors[c])
            .field(model.fit_y.coefficients[c])
            .field(model.fit_y.standard_errors[c]);
        w.end_row();
    };
    row("pi_lag", "pi");
    row("y_lag", "y");
    if (!model.restrict_rate) row("i_lag", "i");
    for (const auto& d : model.dummy_names) row(d, d);
    row("constant", "const");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    w.field("observations").field(static_cast<int>(model.fit_pi.n_obs)).field(nan)
        .field(static_cast<int>(model.fit_y.n_obs)).field(nan);
    w.end_row();
    w.field("r_squared").field(model.fit_pi.r_squared).field(nan).field(model.fit_y.r_squared)
        .field(nan);
    w.end_row();
    w.field("adjusted_r_squared").field(model.fit_pi.adjusted_r_squared).field(nan)
        .field(model.fit_y.adjusted_r_squared).field(nan);
    w.end_row();
    w.field("floor_bindings").field(model.floor_bindings).field(nan).field(nan).field(nan);
    w.end_row();
}

}  // namespace qtaylor
