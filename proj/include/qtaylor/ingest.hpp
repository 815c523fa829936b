#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qtaylor/calendar.hpp"

namespace qtaylor {

enum class Frequency { monthly, quarterly };

/// A single raw source series. Dates are strictly increasing and contiguous
/// at the declared frequency; quarterly dates are stamped with the first
/// month of the quarter.
struct RawSeries {
    std::string label;
    Frequency frequency = Frequency::quarterly;
    std::vector<Month> dates;
    Eigen::VectorXd values;
    std::vector<std::string> warnings;

    std::size_t size() const { return dates.size(); }
    Quarter quarter_at(std::size_t k) const { return Quarter::of(dates[k]); }
};

struct DummySpec {
    std::string name;
    Quarter start;
    Quarter end;  // inclusive
};

/// Aligned quarterly estimation panel.
struct MacroPanel {
    std::vector<Quarter> quarters;
    Eigen::VectorXd pi;  // 100 * log-difference of the price index
    Eigen::VectorXd y;   // output gap, percent
    Eigen::VectorXd i;   // policy rate, percent
    std::vector<std::string> dummy_names;
    Eigen::MatrixXd dummies;  // rows = quarters, 0/1

    Eigen::Index size() const { return pi.size(); }
};

RawSeries load_series(const std::filesystem::path& path, Frequency frequency);
RawSeries parse_series(std::istream& in, Frequency frequency, std::string label);

/// Arithmetic average of the three months of each quarter. Incomplete
/// boundary quarters are dropped with a warning.
RawSeries monthly_to_quarterly(const RawSeries& series);

RawSeries build_output_gap(const RawSeries& gdp, const RawSeries& potential);
RawSeries build_inflation(const RawSeries& price_index);

enum class DummyTiming {
    dependent,  // dummy at t+1 enters the regression for the variable dated t+1
    regressor,  // dummy dated with the lagged regressors
};

MacroPanel assemble_panel(const RawSeries& pi, const RawSeries& y, const RawSeries& i,
                          std::pair<Quarter, Quarter> window,
                          const std::vector<DummySpec>& dummies);

/// Restrict a panel to a sub-window (inclusive); errors if not covered.
MacroPanel slice_panel(const MacroPanel& panel, std::pair<Quarter, Quarter> window);

struct ColumnSummary {
    std::string name;
    double mean = 0, min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

/// Summary statistics for i, y and pi (in that order, mirroring the
/// descriptive table). Quartiles use the left-continuous empirical inverse.
std::vector<ColumnSummary> descriptive_stats(const MacroPanel& panel);

void write_panel_csv(std::ostream& out, const MacroPanel& panel);

}  // namespace qtaylor
