#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qtaylor/calendar.hpp"
#include "qtaylor/ingest.hpp"
#include "qtaylor/qdp.hpp"
#include "qtaylor/quantile.hpp"
#include "qtaylor/rule.hpp"
#include "qtaylor/skedastic.hpp"

namespace qtaylor {

struct QdpGridSpec {
    int state_points = 41;  // pi and y
    double state_pad = 1.0;
    double i_min = 0.0;
    double i_max = 20.0;
    int i_points = 81;
};

struct RunConfig {
    std::filesystem::path gdp_path = "data/GDPC1.csv";
    std::filesystem::path potential_path = "data/GDPPOT.csv";
    std::filesystem::path price_path = "data/PCECTPI.csv";
    std::filesystem::path rate_path = "data/FEDFUNDS.csv";  // monthly

    std::pair<Quarter, Quarter> window{{1954, 4}, {2025, 2}};
    std::vector<DummySpec> dummies{{"GFC", {2007, 4}, {2009, 4}}, {"COVID", {2020, 1}, {2021, 1}}};
    bool include_dummies = false;
    DummyTiming dummy_timing = DummyTiming::dependent;

    Calibration calib;
    SkedasticForm skedastic_form = SkedasticForm::linear_sqrt;
    bool restrict_gamma_i = true;
    double skedastic_floor = 1e-8;

    RuleCase rule_case = RuleCase::location_scale_states;
    Grouping grouping = Grouping::rederived;
    TauGrid tau_grid = TauGrid::uniform(99);
    std::vector<double> representative_taus{0.1, 0.25, 0.5, 0.75, 0.9};

    QdpGridSpec qdp_grid;
    double qdp_tau = 0.5;
    double qdp_tol = 1e-6;
    int qdp_max_iter = 5000;
    StoppingRule qdp_stopping = StoppingRule::span;
    int qdp_margin = 4;

    std::filesystem::path output_dir = "out";

    void validate() const;
};

/// Applies one `key = value` setting; throws ConfigError on unknown keys or
/// malformed values. Relative paths are resolved against `base_dir`.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   const std::filesystem::path& base_dir = {});

/// Plain-text key-value file: one `key = value` per line, `#` starts a comment.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Robustness presets: lambda_0.5, lambda_2, post_1979, post_1979_dummies.
void apply_preset(RunConfig& config, const std::string& preset);
const std::vector<std::string>& robustness_presets();

/// Every setting in a fixed order and format; input to the run hash.
std::string canonical_text(const RunConfig& config);

}  // namespace qtaylor
