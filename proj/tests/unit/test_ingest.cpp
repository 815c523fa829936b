#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qtaylor/errors.hpp"
#include "qtaylor/ingest.hpp"
#include "support/synthetic.hpp"

using namespace qtaylor;

namespace {

RawSeries parse(const std::string& text, Frequency f = Frequency::quarterly) {
    std::istringstream in(text);
    return parse_series(in, f, "TEST");
}

RawSeries quarterly(Quarter first, std::vector<double> values) {
    RawSeries s;
    s.label = "Q";
    for (double v : values) {
        s.dates.push_back(first.first_month());
        first = first.next();
    }
    s.values = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    return s;
}

std::string error_of(const std::string& text, Frequency f = Frequency::quarterly) {
    try {
        parse(text, f);
    } catch (const DataError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("load two quarterly observations") {
    const RawSeries s = parse("DATE,VALUE\n1954-10-01,1.0\n1955-01-01,1.1\n");
    REQUIRE(s.size() == 2);
    CHECK(s.quarter_at(0) == Quarter{1954, 4});
    CHECK(s.quarter_at(1) == Quarter{1955, 1});
    CHECK(s.values[1] == doctest::Approx(1.1));
}

TEST_CASE("load rejects malformed input") {
    CHECK(error_of("DATE,VALUE\n1954-10-01,1\n1954-10-01,2\n").find("non-monotone dates") !=
          std::string::npos);
    CHECK(error_of("DATE,VALUE\n").find("no observations") != std::string::npos);
    CHECK(error_of("").find("header") != std::string::npos);
    CHECK(error_of("DATE,VALUE\n1954-10-01,.\n").find("missing value") != std::string::npos);
    CHECK(error_of("DATE,VALUE\n1954-10-01,\n").find("missing value") != std::string::npos);
    CHECK(error_of("DATE,VALUE\n1954-10-01,abc\n").find("unparseable") != std::string::npos);
    CHECK(error_of("DATE,VALUE\n1954-10-01,1\n1955-04-01,2\n").find("gap") != std::string::npos);
    CHECK_FALSE(error_of("DATE,VALUE\n1954-11-01,1\n").empty());
    CHECK(error_of("DATE,VALUE\n1954-01-01,1\n1954-03-01,2\n", Frequency::monthly).find("gap") !=
          std::string::npos);
}

TEST_CASE("monthly to quarterly averages complete quarters") {
    const RawSeries m = parse(
        "DATE,VALUE\n2000-01-01,4\n2000-02-01,4\n2000-03-01,4\n"
        "2000-04-01,1\n2000-05-01,2\n2000-06-01,6\n2000-07-01,9\n",
        Frequency::monthly);
    const RawSeries q = monthly_to_quarterly(m);
    REQUIRE(q.size() == 2);
    CHECK(q.values[0] == 4.0);
    CHECK(q.values[1] == 3.0);
    CHECK(q.quarter_at(1) == Quarter{2000, 2});
    REQUIRE(q.warnings.size() == 1);
    CHECK(q.warnings[0].find("2000Q3") != std::string::npos);
}

TEST_CASE("monthly to quarterly drops a leading partial quarter") {
    const RawSeries m = parse(
        "DATE,VALUE\n1954-07-01,1\n1954-08-01,2\n1954-09-01,3\n1954-10-01,4\n",
        Frequency::monthly);
    CHECK(monthly_to_quarterly(m).size() == 1);
    const RawSeries lead = parse("DATE,VALUE\n1954-08-01,2\n1954-09-01,3\n1954-10-01,4\n"
                                 "1954-11-01,5\n1954-12-01,6\n",
                                 Frequency::monthly);
    const RawSeries q = monthly_to_quarterly(lead);
    REQUIRE(q.size() == 1);
    CHECK(q.quarter_at(0) == Quarter{1954, 4});
    CHECK(q.values[0] == 5.0);
    CHECK(q.warnings.size() == 1);
}

TEST_CASE("monthly to quarterly preserves the mean over complete quarters") {
    std::ostringstream text;
    text << "DATE,VALUE\n";
    Month m{1990, 1};
    for (int k = 0; k < 24; ++k, m = m.next()) {
        const double v = std::sin(0.7 * k) * 3.0 + 5.0;
        text << m.to_iso() << ',' << v << '\n';
    }
    const RawSeries q = monthly_to_quarterly(parse(text.str(), Frequency::monthly));
    REQUIRE(q.size() == 8);
    const RawSeries reread = parse(text.str(), Frequency::monthly);
    CHECK(q.values.mean() == doctest::Approx(reread.values.mean()).epsilon(1e-14));
}

TEST_CASE("output gap") {
    const RawSeries gdp = quarterly({2000, 1}, {100, 102, 91});
    const RawSeries pot = quarterly({2000, 1}, {100, 100, 100});
    const RawSeries gap = build_output_gap(gdp, pot);
    REQUIRE(gap.size() == 3);
    CHECK(gap.values[0] == 0.0);
    CHECK(gap.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(gap.values[2] == doctest::Approx(-9.0).epsilon(1e-14));
    CHECK_THROWS_AS(build_output_gap(gdp, quarterly({2000, 1}, {100, 0, 100})), DataError);
}

TEST_CASE("output gap uses the overlap only") {
    const RawSeries gdp = quarterly({2000, 1}, {100, 101, 102, 103});
    const RawSeries pot = quarterly({2000, 3}, {100, 100, 100, 100});
    const RawSeries gap = build_output_gap(gdp, pot);
    REQUIRE(gap.size() == 2);
    CHECK(gap.quarter_at(0) == Quarter{2000, 3});
    CHECK(gap.values[1] == doctest::Approx(3.0));
}

TEST_CASE("inflation") {
    const RawSeries flat = build_inflation(quarterly({2000, 1}, {100, 100, 100}));
    REQUIRE(flat.size() == 2);
    CHECK((flat.values.array() == 0.0).all());
    CHECK(flat.quarter_at(0) == Quarter{2000, 2});

    const RawSeries one = build_inflation(quarterly({2000, 1}, {100, 101}));
    CHECK(one.values[0] == doctest::Approx(0.99503308531681).epsilon(1e-12));

    std::vector<double> geometric{50};
    for (int k = 0; k < 20; ++k) geometric.push_back(geometric.back() * 1.013);
    const RawSeries g = build_inflation(quarterly({1990, 1}, geometric));
    for (Eigen::Index k = 0; k < g.values.size(); ++k) {
        CHECK(g.values[k] == doctest::Approx(100.0 * std::log(1.013)).epsilon(1e-10));
    }

    const RawSeries single = build_inflation(quarterly({2000, 1}, {100}));
    CHECK(single.size() == 0);
    CHECK(single.warnings.size() == 1);
    CHECK_THROWS_AS(build_inflation(quarterly({2000, 1}, {100, -1})), DataError);
}

TEST_CASE("assemble panel over the full window") {
    const auto dir = testing::scratch_dir("ingest_full");
    const auto files = testing::write_synthetic_fred(dir);
    const RawSeries pi = build_inflation(load_series(files.price, Frequency::quarterly));
    const RawSeries y = build_output_gap(load_series(files.gdp, Frequency::quarterly),
                                         load_series(files.potential, Frequency::quarterly));
    const RawSeries i = monthly_to_quarterly(load_series(files.rate, Frequency::monthly));
    CHECK(i.warnings.size() == 1);

    const std::vector<DummySpec> dummies{{"GFC", {2007, 4}, {2009, 4}}, {"COVID", {2020, 1}, {2021, 1}}};
    const MacroPanel p = assemble_panel(pi, y, i, {{1954, 4}, {2025, 2}}, dummies);
    CHECK(p.size() == 283);
    CHECK(p.quarters.front() == Quarter{1954, 4});
    CHECK(p.quarters.back() == Quarter{2025, 2});
    CHECK(p.dummies.col(0).sum() == 9);
    CHECK(p.dummies.col(1).sum() == 5);
    CHECK((p.dummies.array() == 0 || p.dummies.array() == 1).all());

    // Values come back from the files as simulated.
    const Eigen::Index offset = quarter_offset(files.truth.quarters.front(), {1954, 4});
    CHECK((p.pi - files.truth.pi.segment(offset, 283)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((p.y - files.truth.y.segment(offset, 283)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((p.i - files.truth.i.segment(offset, 283)).cwiseAbs().maxCoeff() < 1e-12);

    const MacroPanel post = slice_panel(p, {{1979, 4}, {2025, 2}});
    CHECK(post.size() == 183);
    CHECK(post.dummies.rows() == 183);
    CHECK_THROWS_AS(slice_panel(p, {{1950, 1}, {2025, 2}}), DataError);
}

TEST_CASE("assemble panel reports missing quarters") {
    const RawSeries a = quarterly({2000, 1}, {1, 2, 3, 4});
    const RawSeries b = quarterly({2000, 1}, {1, 2, 3});
    try {
        assemble_panel(a, a, b, {{2000, 1}, {2000, 4}}, {});
        FAIL("expected an error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("2000Q4") != std::string::npos);
    }
    CHECK_THROWS_AS(assemble_panel(a, a, a, {{2000, 1}, {2001, 1}}, {}), DataError);
    CHECK(assemble_panel(a, a, a, {{2000, 2}, {2000, 4}}, {}).size() == 3);
}

TEST_CASE("descriptive statistics") {
    MacroPanel p;
    p.quarters = {{2000, 1}, {2000, 2}, {2000, 3}, {2000, 4}};
    p.pi = Eigen::Vector4d(1, 2, 3, 4);
    p.y = Eigen::Vector4d::Constant(-0.5);
    p.i = Eigen::Vector4d(4, 3, 2, 1);
    p.dummies.resize(4, 0);
    const auto stats = descriptive_stats(p);
    REQUIRE(stats.size() == 3);
    CHECK(stats[0].name == "i");
    CHECK(stats[1].name == "y");
    CHECK(stats[2].name == "pi");
    CHECK(stats[2].median == 2.0);
    CHECK(stats[2].q1 == 1.0);
    CHECK(stats[2].q3 == 3.0);
    CHECK(stats[2].mean == 2.5);
    CHECK(stats[1].min == -0.5);
    CHECK(stats[1].max == -0.5);
    CHECK(stats[1].median == -0.5);
    CHECK(stats[1].mean == -0.5);
}

TEST_CASE("panel csv header") {
    MacroPanel p;
    p.quarters = {{2000, 1}, {2000, 2}};
    p.pi = Eigen::Vector2d(1, 2);
    p.y = Eigen::Vector2d(0, 0);
    p.i = Eigen::Vector2d(3, 3);
    p.dummy_names = {"GFC"};
    p.dummies = Eigen::MatrixXd::Zero(2, 1);
    std::ostringstream out;
    write_panel_csv(out, p);
    CHECK(out.str().rfind("quarter,pi,y,i,GFC\n2000Q1,1,0,3,0\n", 0) == 0);
}

}
