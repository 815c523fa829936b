#include <doctest.h>

#include <Eigen/LU>
#include <random>
#include <sstream>

#include "qtaylor/errors.hpp"
#include "qtaylor/regress.hpp"
#include "qtaylor/simulate.hpp"
#include "support/synthetic.hpp"

using namespace qtaylor;

namespace {

Eigen::MatrixXd random_design(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(n, k);
    x.col(0).setOnes();
    for (Eigen::Index c = 1; c < k; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) x(r, c) = normal(rng);
    }
    return x;
}

}  // namespace

TEST_SUITE("regress") {

TEST_CASE("three points on a line") {
    Eigen::MatrixXd x(3, 2);
    x << 1, 0, 1, 1, 1, 2;
    const OlsFit f = ols(x, Eigen::Vector3d(1, 3, 5), {"const", "x"});
    CHECK(f.coefficients[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(f.coefficients[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.n_obs == 3);
}

TEST_CASE("response equal to a regressor") {
    const Eigen::MatrixXd x = random_design(50, 4, 1);
    const OlsFit f = ols(x, x.col(2));
    CHECK(f.coefficients[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f.coefficients[0]) < 1e-12);
    CHECK(std::abs(f.coefficients[1]) < 1e-12);
    CHECK(std::abs(f.coefficients[3]) < 1e-12);
    CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("rank deficiency names the collinear columns") {
    Eigen::MatrixXd x = random_design(30, 3, 2);
    Eigen::MatrixXd dup(30, 4);
    dup << x, x.col(1);
    try {
        ols(dup, x.col(1) * 2.0, {"const", "a", "b", "a_copy"});
        FAIL("expected rank error");
    } catch (const NumericalError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("rank") != std::string::npos);
        CHECK((msg.find("a_copy") != std::string::npos || msg.find("a") != std::string::npos));
    }
    Eigen::MatrixXd zero(30, 4);
    zero << x, Eigen::VectorXd::Zero(30);
    CHECK_THROWS_AS(ols(zero, x.col(1), {"const", "a", "b", "dummy"}), NumericalError);
    CHECK_THROWS_AS(ols(random_design(3, 4, 3), Eigen::Vector3d(1, 2, 3)), NumericalError);
}

TEST_CASE("residual properties on random designs") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 20 + trial * 3, k = 2 + trial % 5;
        const Eigen::MatrixXd x = random_design(n, k, 100 + trial);
        Eigen::VectorXd y(n);
        for (Eigen::Index r = 0; r < n; ++r) y[r] = normal(rng) * 3 + 1;
        const OlsFit f = ols(x, y);

        // orthogonality and zero-sum residuals
        const Eigen::VectorXd inner = x.transpose() * f.residuals;
        CHECK(inner.cwiseAbs().maxCoeff() < 1e-10 * (1 + y.cwiseAbs().sum()));
        CHECK(std::abs(f.residuals.sum()) < 1e-10 * (1 + y.cwiseAbs().sum()));
        CHECK(f.r_squared >= 0.0);
        CHECK(f.r_squared <= 1.0);
        CHECK((y - x * f.coefficients - f.residuals).cwiseAbs().maxCoeff() < 1e-12);

        // refitting the fitted values reproduces the coefficients
        const OlsFit g = ols(x, x * f.coefficients);
        CHECK((g.coefficients - f.coefficients).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(g.residuals.cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("standard errors match the normal-equations formula") {
    const Eigen::MatrixXd x = random_design(40, 3, 5);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> normal;
    Eigen::VectorXd y(40);
    for (Eigen::Index r = 0; r < 40; ++r) y[r] = x(r, 1) - 0.5 * x(r, 2) + normal(rng);
    const OlsFit f = ols(x, y);
    const double s2 = f.residuals.squaredNorm() / (40 - 3);
    const Eigen::MatrixXd cov = s2 * (x.transpose() * x).inverse();
    for (Eigen::Index c = 0; c < 3; ++c) {
        CHECK(f.standard_errors[c] == doctest::Approx(std::sqrt(cov(c, c))).epsilon(1e-10));
    }
    const double tss = (y.array() - y.mean()).matrix().squaredNorm();
    CHECK(f.r_squared == doctest::Approx(1 - f.residuals.squaredNorm() / tss));
    CHECK(f.adjusted_r_squared == doctest::Approx(1 - (1 - f.r_squared) * 39.0 / 37.0));
}

TEST_CASE("VAR recovers a simulated law of motion") {
    const LawOfMotion truth = testing::baseline_law();
    const MacroPanel p =
        simulate_var_panel(truth.pi_eq, truth.y_eq, RateProcess{}, 0.01, 0.01, 5000, 99);
    const LawOfMotion law = fit_var1(p, false);
    CHECK(law.fit_pi.n_obs == 5000);
    CHECK(law.residuals_pi.size() == 5000);
    CHECK(law.residual_quarters.front() == p.quarters[1]);
    const auto check_eq = [](const EquationCoefficients& est, const EquationCoefficients& tru,
                             const OlsFit& fit) {
        const Eigen::Vector4d e(est.intercept, est.rate, est.inflation, est.output_gap);
        const Eigen::Vector4d t(tru.intercept, tru.rate, tru.inflation, tru.output_gap);
        for (int k = 0; k < 4; ++k) {
            CHECK(std::abs(e[k] - t[k]) < 3 * fit.standard_errors[k]);
            CHECK(std::abs(e[k] - t[k]) < 0.01);
            CHECK(fit.coefficients[k] == e[k]);
        }
    };
    check_eq(law.pi_eq, truth.pi_eq, law.fit_pi);
    check_eq(law.y_eq, truth.y_eq, law.fit_y);
}

TEST_CASE("VAR design and dummy timing") {
    const auto dir = testing::scratch_dir("regress_dummy");
    const auto files = testing::write_synthetic_fred(dir);
    MacroPanel p = files.truth;
    p.dummy_names = {"D"};
    p.dummies = Eigen::MatrixXd::Zero(p.size(), 1);
    p.dummies(20, 0) = 1;
    p.dummies(21, 0) = 1;
    const Eigen::MatrixXd dep = var1_design(p, true, DummyTiming::dependent);
    const Eigen::MatrixXd reg = var1_design(p, true, DummyTiming::regressor);
    CHECK(dep.rows() == p.size() - 1);
    CHECK(dep.cols() == 5);
    CHECK(dep(19, 4) == 1);   // row t=19 explains quarter 20
    CHECK(reg(19, 4) == 0);
    CHECK(reg(20, 4) == 1);
    CHECK(dep(5, 1) == p.i[5]);
    CHECK(dep(5, 2) == p.pi[5]);
    CHECK(dep(5, 3) == p.y[5]);

    const LawOfMotion law = fit_var1(p, true);
    CHECK(law.pi_eq.dummies.size() == 1);
    CHECK(law.fit_pi.names.back() == "D");

    p.dummies.setZero();
    CHECK_THROWS_AS(fit_var1(p, true), NumericalError);
    CHECK_NOTHROW(fit_var1(p, false));

    MacroPanel tiny = p;
    tiny.pi.conservativeResize(5);
    tiny.y.conservativeResize(5);
    tiny.i.conservativeResize(5);
    tiny.quarters.resize(5);
    tiny.dummies.conservativeResize(5, 1);
    CHECK_THROWS_AS(fit_var1(tiny, false), DataError);
}

TEST_CASE("VAR table layout") {
    const LawOfMotion truth = testing::baseline_law();
    const MacroPanel p = simulate_var_panel(truth.pi_eq, truth.y_eq, RateProcess{}, 0.3, 1.0, 300, 3);
    std::ostringstream out;
    write_var_table(out, fit_var1(p, false));
    std::istringstream in(out.str());
    std::string line;
    std::vector<std::string> first_fields;
    while (std::getline(in, line)) first_fields.push_back(line.substr(0, line.find(',')));
    const std::vector<std::string> expected{"term", "i_lag", "pi_lag", "y_lag", "constant",
                                            "observations", "r_squared", "adjusted_r_squared"};
    CHECK(first_fields == expected);
    CHECK(out.str().find("observations,300,") != std::string::npos);
}

}
