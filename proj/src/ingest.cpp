#include "qtaylor/ingest.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "qtaylor/csv.hpp"
#include "qtaylor/errors.hpp"
#include "qtaylor/order_statistics.hpp"

namespace qtaylor {

namespace {

bool is_missing_token(const std::string& s) {
    return s.empty() || s == "." || s == "NA" || s == "NaN" || s == "nan";
}

double parse_value(const std::string& s, const Month& date) {
    if (is_missing_token(s)) {
        throw DataError("missing value at " + date.to_iso());
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("unparseable value '" + s + "' at " + date.to_iso());
    }
}

Month step(Month m, Frequency f) {
    if (f == Frequency::monthly) return m.next();
    return Quarter::of(m).next().first_month();
}

void require_quarterly(const RawSeries& s, const char* what) {
    if (s.frequency != Frequency::quarterly) {
        throw DataError(std::string(what) + ": series '" + s.label + "' is not quarterly");
    }
}

// Index of quarter q in a contiguous quarterly series, or -1.
long index_of(const RawSeries& s, Quarter q) {
    if (s.size() == 0) return -1;
    const int off = quarter_offset(s.quarter_at(0), q);
    if (off < 0 || static_cast<std::size_t>(off) >= s.size()) return -1;
    return off;
}

}  // namespace

RawSeries parse_series(std::istream& in, Frequency frequency, std::string label) {
    RawSeries out;
    out.label = std::move(label);
    out.frequency = frequency;

    std::string line;
    if (!std::getline(in, line)) throw DataError(out.label + ": missing header row");
    if (split_fields(line).size() != 2) {
        throw DataError(out.label + ": header must have two columns (date, value)");
    }

    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            throw DataError(out.label + ": line " + std::to_string(line_no) +
                            " does not have two columns");
        }
        const Month date = Month::parse_iso(fields[0]);
        if (frequency == Frequency::quarterly && (date.month - 1) % 3 != 0) {
            throw DataError(out.label + ": quarterly observation " + fields[0] +
                            " is not stamped with the first month of its quarter");
        }
        if (!out.dates.empty()) {
            if (!(out.dates.back() < date)) {
                throw DataError(out.label + ": non-monotone dates at " + fields[0]);
            }
            if (step(out.dates.back(), frequency) != date) {
                throw DataError(out.label + ": gap in series before " + fields[0]);
            }
        }
        values.push_back(parse_value(fields[1], date));
        out.dates.push_back(date);
    }
    if (out.dates.empty()) throw DataError(out.label + ": no observations");
    out.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                   static_cast<Eigen::Index>(values.size()));
    return out;
}

RawSeries load_series(const std::filesystem::path& path, Frequency frequency) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return parse_series(in, frequency, path.stem().string());
}

RawSeries monthly_to_quarterly(const RawSeries& series) {
    if (series.frequency != Frequency::monthly) {
        throw DataError(series.label + ": frequency conversion expects a monthly series");
    }
    RawSeries out;
    out.label = series.label;
    out.frequency = Frequency::quarterly;
    out.warnings = series.warnings;

    std::map<Quarter, std::pair<int, double>> buckets;
    for (std::size_t k = 0; k < series.size(); ++k) {
        auto& b = buckets[Quarter::of(series.dates[k])];
        b.first += 1;
        b.second += series.values[static_cast<Eigen::Index>(k)];
    }
    std::vector<double> values;
    for (const auto& [q, b] : buckets) {
        if (b.first != 3) {
            out.warnings.push_back("dropped incomplete quarter " + q.to_string() + " (" +
                                   std::to_string(b.first) + " of 3 months)");
            continue;
        }
        out.dates.push_back(q.first_month());
        values.push_back(b.second / 3.0);
    }
    out.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                   static_cast<Eigen::Index>(values.size()));
    return out;
}

RawSeries build_output_gap(const RawSeries& gdp, const RawSeries& potential) {
    require_quarterly(gdp, "output gap");
    require_quarterly(potential, "output gap");
    RawSeries out;
    out.label = "y";
    out.frequency = Frequency::quarterly;
    std::vector<double> values;
    for (std::size_t k = 0; k < gdp.size(); ++k) {
        const long j = index_of(potential, gdp.quarter_at(k));
        if (j < 0) continue;
        const double pot = potential.values[j];
        if (!(pot > 0.0)) {
            throw DataError("potential output must be positive (" +
                            gdp.quarter_at(k).to_string() + ")");
        }
        out.dates.push_back(gdp.dates[k]);
        values.push_back((gdp.values[static_cast<Eigen::Index>(k)] / pot - 1.0) * 100.0);
    }
    if (values.empty()) throw DataError("output gap: GDP and potential do not overlap");
    out.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                   static_cast<Eigen::Index>(values.size()));
    return out;
}

RawSeries build_inflation(const RawSeries& price_index) {
    require_quarterly(price_index, "inflation");
    if ((price_index.values.array() <= 0.0).any()) {
        throw DataError("inflation: price index must be strictly positive");
    }
    RawSeries out;
    out.label = "pi";
    out.frequency = Frequency::quarterly;
    const auto n = price_index.values.size();
    if (n < 2) {
        out.warnings.push_back("inflation: fewer than two price observations, result empty");
        out.values.resize(0);
        return out;
    }
    out.dates.assign(price_index.dates.begin() + 1, price_index.dates.end());
    // Scalar log per element: Eigen's vectorized log can round differently
    // from the scalar tail, which would break exact zeros for flat prices.
    const Eigen::ArrayXd logs =
        price_index.values.array().unaryExpr([](double v) { return std::log(v); });
    out.values = 100.0 * (logs.tail(n - 1) - logs.head(n - 1)).matrix();
    return out;
}

MacroPanel assemble_panel(const RawSeries& pi, const RawSeries& y, const RawSeries& i,
                          std::pair<Quarter, Quarter> window,
                          const std::vector<DummySpec>& dummies) {
    require_quarterly(pi, "panel");
    require_quarterly(y, "panel");
    require_quarterly(i, "panel");
    const int n = quarters_inclusive(window.first, window.second);
    if (n < 2) throw ConfigError("sample window must span at least two quarters");
    for (const auto& d : dummies) {
        if (d.end < d.start) throw ConfigError("dummy '" + d.name + "' ends before it starts");
    }

    MacroPanel panel;
    panel.pi.resize(n);
    panel.y.resize(n);
    panel.i.resize(n);
    panel.dummies = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(dummies.size()));
    for (const auto& d : dummies) panel.dummy_names.push_back(d.name);

    std::string missing;
    Quarter q = window.first;
    for (int t = 0; t < n; ++t, q = q.next()) {
        panel.quarters.push_back(q);
        const RawSeries* cols[] = {&pi, &y, &i};
        Eigen::VectorXd* dest[] = {&panel.pi, &panel.y, &panel.i};
        for (int c = 0; c < 3; ++c) {
            const long j = index_of(*cols[c], q);
            if (j < 0) {
                missing += " " + cols[c]->label + "@" + q.to_string();
                continue;
            }
            (*dest[c])[t] = cols[c]->values[j];
        }
        for (std::size_t d = 0; d < dummies.size(); ++d) {
            if (dummies[d].start <= q && q <= dummies[d].end) {
                panel.dummies(t, static_cast<Eigen::Index>(d)) = 1.0;
            }
        }
    }
    if (!missing.empty()) {
        throw DataError("sample window " + window.first.to_string() + "-" +
                        window.second.to_string() + " not covered; missing:" + missing);
    }
    return panel;
}

MacroPanel slice_panel(const MacroPanel& panel, std::pair<Quarter, Quarter> window) {
    if (panel.quarters.empty()) throw DataError("cannot slice an empty panel");
    const int first = quarter_offset(panel.quarters.front(), window.first);
    const int n = quarters_inclusive(window.first, window.second);
    if (first < 0 || n < 2 || first + n > static_cast<int>(panel.quarters.size())) {
        throw DataError("sub-window " + window.first.to_string() + "-" +
                        window.second.to_string() + " not covered by the panel");
    }
    MacroPanel out;
    out.quarters.assign(panel.quarters.begin() + first, panel.quarters.begin() + first + n);
    out.pi = panel.pi.segment(first, n);
    out.y = panel.y.segment(first, n);
    out.i = panel.i.segment(first, n);
    out.dummy_names = panel.dummy_names;
    out.dummies = panel.dummies.middleRows(first, n);
    return out;
}

std::vector<ColumnSummary> descriptive_stats(const MacroPanel& panel) {
    if (panel.size() == 0) throw DataError("descriptive statistics of an empty panel");
    auto summarize = [](std::string name, const Eigen::VectorXd& v) {
        std::vector<double> sorted(v.data(), v.data() + v.size());
        std::sort(sorted.begin(), sorted.end());
        const std::span<const double> s(sorted);
        return ColumnSummary{std::move(name),  v.mean(),
                             sorted.front(),   quantile_of_sorted(s, 0.25),
                             quantile_of_sorted(s, 0.5), quantile_of_sorted(s, 0.75),
                             sorted.back()};
    };
    return {summarize("i", panel.i), summarize("y", panel.y), summarize("pi", panel.pi)};
}

void write_panel_csv(std::ostream& out, const MacroPanel& panel) {
    CsvWriter w(out);
    std::vector<std::string> names{"quarter", "pi", "y", "i"};
    names.insert(names.end(), panel.dummy_names.begin(), panel.dummy_names.end());
    w.header(names);
    for (Eigen::Index t = 0; t < panel.size(); ++t) {
        w.field(panel.quarters[static_cast<std::size_t>(t)].to_string())
            .field(panel.pi[t])
            .field(panel.y[t])
            .field(panel.i[t]);
        for (Eigen::Index d = 0; d < panel.dummies.cols(); ++d) {
            w.field(static_cast<int>(panel.dummies(t, d)));
        }
        w.end_row();
    }
}

}  // namespace qtaylor
