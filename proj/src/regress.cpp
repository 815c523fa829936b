#include "qtaylor/regress.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <ostream>

#include "qtaylor/csv.hpp"
#include "qtaylor/errors.hpp"

namespace qtaylor {

namespace {

bool has_intercept_column(const Eigen::MatrixXd& x) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        if ((x.col(c).array() == 1.0).all()) return true;
    }
    return false;
}

std::string column_name(const std::vector<std::string>& names, Eigen::Index c) {
    const auto k = static_cast<std::size_t>(c);
    return k < names.size() ? names[k] : "column " + std::to_string(c);
}

EquationCoefficients unpack(const Eigen::VectorXd& b) {
    EquationCoefficients e;
    e.intercept = b[0];
    e.rate = b[1];
    e.inflation = b[2];
    e.output_gap = b[3];
    e.dummies = b.tail(b.size() - 4);
    return e;
}

}  // namespace

OlsFit ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
           std::vector<std::string> names) {
    const Eigen::Index n = design.rows();
    const Eigen::Index k = design.cols();
    if (response.size() != n) throw std::invalid_argument("ols: response length mismatch");
    if (k == 0 || n < k) {
        throw NumericalError("ols: need at least as many rows as columns (" +
                             std::to_string(n) + " < " + std::to_string(k) + ")");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < k) {
        std::string cols;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index p = qr.rank(); p < k; ++p) {
            cols += (cols.empty() ? "" : ", ") + column_name(names, perm[p]);
        }
        throw NumericalError("ols: rank-deficient design (rank " + std::to_string(qr.rank()) +
                             " of " + std::to_string(k) + "); collinear: " + cols);
    }

    OlsFit fit;
    fit.names = std::move(names);
    fit.n_obs = n;
    fit.coefficients = qr.solve(response);
    fit.residuals = response - design * fit.coefficients;

    const double rss = fit.residuals.squaredNorm();
    const bool intercept = has_intercept_column(design);
    const double tss = intercept ? (response.array() - response.mean()).matrix().squaredNorm()
                                 : response.squaredNorm();
    fit.r_squared = tss > 0 ? 1.0 - rss / tss : 1.0;
    const double dof = static_cast<double>(n - k);
    const double df_total = intercept ? static_cast<double>(n - 1) : static_cast<double>(n);
    fit.adjusted_r_squared =
        dof > 0 ? 1.0 - (1.0 - fit.r_squared) * df_total / dof
                : std::numeric_limits<double>::quiet_NaN();

    // (X'X)^{-1} = P R^{-1} R^{-T} P^T
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd xtx_inv_perm = r_inv * r_inv.transpose();
    const auto& perm = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv = perm * xtx_inv_perm * perm.transpose();
    const double sigma2 = dof > 0 ? rss / dof : std::numeric_limits<double>::quiet_NaN();
    fit.standard_errors = (sigma2 * xtx_inv.diagonal().array()).sqrt().matrix();
    return fit;
}

Eigen::MatrixXd var1_design(const MacroPanel& panel, bool include_dummies, DummyTiming timing) {
    const Eigen::Index n = panel.size() - 1;
    const Eigen::Index d = include_dummies ? panel.dummies.cols() : 0;
    Eigen::MatrixXd x(n, 4 + d);
    x.col(0).setOnes();
    x.col(1) = panel.i.head(n);
    x.col(2) = panel.pi.head(n);
    x.col(3) = panel.y.head(n);
    if (d > 0) {
        x.rightCols(d) = timing == DummyTiming::dependent ? panel.dummies.bottomRows(n)
                                                          : panel.dummies.topRows(n);
    }
    return x;
}

LawOfMotion fit_var1(const MacroPanel& panel, bool include_dummies, DummyTiming timing) {
    if (panel.size() < 10) throw DataError("fit_var1: panel needs at least 10 quarters");
    const Eigen::Index n = panel.size() - 1;
    const Eigen::MatrixXd x = var1_design(panel, include_dummies, timing);

    std::vector<std::string> names{"const", "i", "pi", "y"};
    if (include_dummies) {
        names.insert(names.end(), panel.dummy_names.begin(), panel.dummy_names.end());
    }

    LawOfMotion law;
    law.dummy_timing = timing;
    if (include_dummies) law.dummy_names = panel.dummy_names;
    law.fit_pi = ols(x, panel.pi.tail(n), names);
    law.fit_y = ols(x, panel.y.tail(n), names);
    law.pi_eq = unpack(law.fit_pi.coefficients);
    law.y_eq = unpack(law.fit_y.coefficients);
    law.residuals_pi = law.fit_pi.residuals;
    law.residuals_y = law.fit_y.residuals;
    law.residual_quarters.assign(panel.quarters.begin() + 1, panel.quarters.end());
    return law;
}

void write_var_table(std::ostream& out, const LawOfMotion& law) {
    CsvWriter w(out);
    w.header({"term", "pi", "pi_se", "y", "y_se"});
    auto row = [&](const std::string& term, Eigen::Index c) {
        w.field(term)
            .field(law.fit_pi.coefficients[c])
            .field(law.fit_pi.standard_errors[c])
            .field(law.fit_y.coefficients[c])
            .field(law.fit_y.standard_errors[c]);
        w.end_row();
    };
    row("i_lag", 1);
    row("pi_lag", 2);
    row("y_lag", 3);
    row("constant", 0);
    for (std::size_t d = 0; d < law.dummy_names.size(); ++d) {
        row(law.dummy_names[d], 4 + static_cast<Eigen::Index>(d));
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    w.field("observations").field(static_cast<int>(law.fit_pi.n_obs)).field(nan)
        .field(static_cast<int>(law.fit_y.n_obs)).field(nan);
    w.end_row();
    w.field("r_squared").field(law.fit_pi.r_squared).field(nan).field(law.fit_y.r_squared)
        .field(nan);
    w.end_row();
    w.field("adjusted_r_squared").field(law.fit_pi.adjusted_r_squared).field(nan)
        .field(law.fit_y.adjusted_r_squared).field(nan);
    w.end_row();
}

}  // namespace qtaylor
