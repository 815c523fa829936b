#include <doctest.h>

#include <cmath>

#include "qtaylor/errors.hpp"
#include "qtaylor/root_finding.hpp"

using namespace qtaylor;

TEST_SUITE("root_finding") {

TEST_CASE("bisection finds a simple root") {
    const RootResult r = bisect_root([](double x) { return x * x * x - 2.0; }, 0.0, 3.0);
    CHECK(r.converged);
    CHECK(r.x == doctest::Approx(std::cbrt(2.0)).epsilon(1e-9));
    CHECK(std::abs(r.fx) < 1e-9);
}

TEST_CASE("bracket expands until a sign change") {
    const RootResult r = bisect_root([](double x) { return x - 130.0; }, -25.0, 25.0);
    CHECK(r.converged);
    CHECK(r.x == doctest::Approx(130.0));
    CHECK(r.hi >= 130.0);
    CHECK(r.hi - r.lo <= 2 * 400.0 + 1e-9);
}

TEST_CASE("no sign change is reported with endpoint residuals") {
    try {
        bisect_root([](double x) { return 1.0 + x * x; }, -50.0, 50.0);
        FAIL("expected an error");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("no sign change") != std::string::npos);
    }
    BracketOptions tight;
    tight.max_half_width = 10;
    CHECK_THROWS_AS(bisect_root([](double x) { return x - 130.0; }, -5.0, 5.0, tight), NumericalError);
}

TEST_CASE("step functions stop once the interval cannot be split") {
    const RootResult r = bisect_root([](double x) { return x < 1.0 ? -1.0 : 1.0; }, 0.0, 3.0);
    CHECK_FALSE(r.converged);
    CHECK(r.x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("root at an endpoint") {
    const RootResult r = bisect_root([](double x) { return x; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.x == 0.0);
}

TEST_CASE("sign changes are counted") {
    CHECK(count_sign_changes([](double x) { return std::sin(x); }, 0.5, 10.0) == 3);
    CHECK(count_sign_changes([](double x) { return x; }, -1.0, 1.0) == 1);
    CHECK(count_sign_changes([](double) { return 2.0; }, -1.0, 1.0) == 0);
}

}
