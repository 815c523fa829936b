#include "qtaylor/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

#include "qtaylor/csv.hpp"
#include "qtaylor/errors.hpp"
#include "qtaylor/qdp.hpp"

namespace qtaylor {

namespace fs = std::filesystem;

std::string to_string(Stage stage) {
    switch (stage) {
        case Stage::prepare: return "prepare";
        case Stage::estimate: return "estimate";
        case Stage::rule: return "rule";
        case Stage::implied_tau: return "implied-tau";
        case Stage::validate_dp: return "validate-dp";
    }
    return "unknown";
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state) {
    for (unsigned char c : bytes) {
        state ^= c;
        state *= 0x100000001b3ULL;
    }
    return state;
}

namespace {

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Collects the files a run writes, relative to its output directory.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    void write(const fs::path& name, const std::function<void(std::ostream&)>& body) {
        const fs::path full = dir_ / name;
        fs::create_directories(full.parent_path());
        std::ofstream out(full, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + full.string());
        body(out);
        if (!out) throw ConfigError("write failed for " + full.string());
        files_.push_back(name);
    }

    void adopt(const Manifest& child, const fs::path& subdir) {
        for (const auto& f : child.files) files_.push_back(subdir / f);
        files_.push_back(subdir / "manifest.txt");
    }

    Manifest finish(const std::string& hash) {
        Manifest m{dir_, hash, files_};
        std::ofstream out(dir_ / "manifest.txt", std::ios::binary);
        out << "hash " << hash << '\n';
        for (const auto& f : files_) out << f.generic_string() << '\n';
        return m;
    }

    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<fs::path> files_;
};

template <class F>
auto in_stage(Stage stage, OutputSet& out, F&& body) -> decltype(body()) {
    const auto fail = [&](const std::exception& e) {
        const std::string msg = to_string(stage) + ": " + e.what();
        std::ofstream marker(out.dir() / "FAILED", std::ios::binary);
        marker << msg << '\n';
        return msg;
    };
    try {
        return body();
    } catch (const ConfigError& e) {
        throw ConfigError(fail(e));
    } catch (const DataError& e) {
        throw DataError(fail(e));
    } catch (const NumericalError& e) {
        throw NumericalError(fail(e));
    } catch (const std::exception& e) {
        throw NumericalError(fail(e));
    }
}

void write_descriptive(std::ostream& os, const MacroPanel& panel) {
    CsvWriter w(os);
    w.header({"statistic", "i", "y", "pi"});
    const auto stats = descriptive_stats(panel);
    const std::vector<std::pair<std::string, double ColumnSummary::*>> rows{
        {"mean", &ColumnSummary::mean},     {"min", &ColumnSummary::min},
        {"q1", &ColumnSummary::q1},         {"median", &ColumnSummary::median},
        {"q3", &ColumnSummary::q3},         {"max", &ColumnSummary::max}};
    for (const auto& [label, member] : rows) {
        w.field(label);
        for (const auto& s : stats) w.field(s.*member);
        w.end_row();
    }
    w.field("observations");
    for (std::size_t k = 0; k < stats.size(); ++k) w.field(static_cast<int>(panel.size()));
    w.end_row();
}

void write_shocks(std::ostream& os, const ShockPanel& shocks) {
    CsvWriter w(os);
    w.header({"quarter", "z_pi", "z_y"});
    for (Eigen::Index k = 0; k < shocks.size(); ++k) {
        w.field(shocks.quarters[static_cast<std::size_t>(k)].to_string())
            .field(shocks.z_pi[k])
            .field(shocks.z_y[k]);
        w.end_row();
    }
}

void write_plot_data(std::ostream& os, const MacroPanel& panel, const ImpliedTauSeries& series,
                     const RuleContext& ctx, const std::vector<double>& taus) {
    CsvWriter w(os);
    w.header({"quarter", "series", "value"});
    for (const auto& row : series.rows) {
        const std::string q = row.quarter.to_string();
        w.field(q).field("i_observed").field(row.i_observed);
        w.end_row();
        w.field(q).field("tau_hat").field(row.valid ? row.tau_hat : std::nan(""));
        w.end_row();
        Eigen::VectorXd curve;
        try {
            curve = rule_curve(ctx, taus, row.state);
        } catch (const NumericalError&) {
            curve = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(taus.size()), std::nan(""));
        }
        for (std::size_t k = 0; k < taus.size(); ++k) {
            w.field(q).field("i_star@" + format_number(taus[k])).field(curve[static_cast<Eigen::Index>(k)]);
            w.end_row();
        }
    }
    (void)panel;
}

QdpProblem make_qdp_problem(const MacroPanel& panel, const RuleContext& ctx,
                            const RunConfig& config) {
    QdpProblem p;
    p.pi_grid = padded_grid(panel.pi, config.qdp_grid.state_points, config.qdp_grid.state_pad);
    p.y_grid = padded_grid(panel.y, config.qdp_grid.state_points, config.qdp_grid.state_pad);
    p.i_grid = Eigen::VectorXd::LinSpaced(config.qdp_grid.i_points, config.qdp_grid.i_min,
                                          config.qdp_grid.i_max);
    p.shocks = ctx.shocks;
    p.calib = ctx.calib;
    p.law = ctx.law;
    if (ctx.rule_case != RuleCase::location_shift) p.sked = ctx.sked;
    p.tau = config.qdp_tau;
    return p;
}

void write_qdp_outputs(OutputSet& out, const MacroPanel& panel, const RuleContext& ctx,
                       const RunConfig& config) {
    const QdpProblem problem = make_qdp_problem(panel, ctx, config);
    const ValueFunction vf = solve_value_iteration(
        problem, IterationOptions{config.qdp_tol, config.qdp_max_iter, config.qdp_stopping});
    out.write("qdp_report.csv", [&](std::ostream& os) {
        CsvWriter w(os);
        w.header({"grouping", "tau", "max_abs", "mean_abs", "max_steps", "n_states", "worst_pi",
                  "worst_y", "worst_i_prev", "iterations", "last_change"});
        for (Grouping g : {Grouping::rederived, Grouping::printed}) {
            RuleContext c = ctx;
            c.grouping = g;
            const auto dev = compare_policy_to_closed_form(vf, problem, c, config.qdp_margin);
            w.field(g == Grouping::rederived ? "rederived" : "printed")
                .field(problem.tau)
                .field(dev.max_abs)
                .field(dev.mean_abs)
                .field(dev.max_steps)
                .field(static_cast<int>(dev.n_states))
                .field(dev.worst.pi)
                .field(dev.worst.y)
                .field(dev.worst.i_prev)
                .field(vf.iterations)
                .field(vf.last_change);
            w.end_row();
        }
    });
    // Slice at the rate-grid point nearest the sample median rate.
    const double median_i = empirical_quantile(panel.i, 0.5);
    Eigen::Index slice = 0;
    (problem.i_grid.array() - median_i).abs().minCoeff(&slice);
    out.write("qdp_value_slice.csv",
              [&](std::ostream& os) { write_value_slice_csv(os, vf, problem, slice); });
}

}  // namespace

std::string run_hash(const RunConfig& config) {
    std::uint64_t h = fnv1a(canonical_text(config));
    for (const auto& p :
         {config.gdp_path, config.potential_path, config.price_path, config.rate_path}) {
        h = fnv1a(read_bytes(p), h);
    }
    return hex64(h);
}

MacroPanel load_panel(const RunConfig& config, std::vector<std::string>* warnings) {
    const RawSeries gdp = load_series(config.gdp_path, Frequency::quarterly);
    const RawSeries potential = load_series(config.potential_path, Frequency::quarterly);
    const RawSeries price = load_series(config.price_path, Frequency::quarterly);
    const RawSeries rate = monthly_to_quarterly(load_series(config.rate_path, Frequency::monthly));
    const RawSeries gap = build_output_gap(gdp, potential);
    const RawSeries inflation = build_inflation(price);
    if (warnings) {
        for (const auto* s : {&gdp, &potential, &price, &rate, &gap, &inflation}) {
            for (const auto& msg : s->warnings) warnings->push_back(s->label + ": " + msg);
        }
    }
    return assemble_panel(inflation, gap, rate, config.window, config.dummies);
}

Estimates estimate_models(const MacroPanel& panel, const RunConfig& config) {
    Estimates e;
    e.law = fit_var1(panel, config.include_dummies, config.dummy_timing);
    SkedasticOptions opts;
    opts.form = config.skedastic_form;
    opts.include_dummies = config.include_dummies;
    opts.restrict_rate = config.restrict_gamma_i;
    opts.floor = config.skedastic_floor;
    e.sked = fit_skedastic(e.law, panel, opts);
    e.shocks = standardize_shocks(e.law, e.sked, panel);
    return e;
}

RuleContext make_rule_context(const Estimates& e, const RunConfig& config) {
    RuleContext ctx;
    ctx.law = e.law;
    ctx.calib = config.calib;
    ctx.rule_case = config.rule_case;
    ctx.grouping = config.grouping;
    if (config.rule_case == RuleCase::location_shift) {
        ctx.shocks.z_pi = e.law.residuals_pi;
        ctx.shocks.z_y = e.law.residuals_y;
        ctx.shocks.quarters = e.law.residual_quarters;
    } else {
        ctx.sked = e.sked;
        ctx.shocks = e.shocks;
    }
    ctx.validate();
    return ctx;
}

Manifest run_pipeline(const RunConfig& config, Stage through) {
    OutputSet out(config.output_dir);
    fs::remove(out.dir() / "FAILED");
    const std::string hash = in_stage(Stage::prepare, out, [&] {
        config.validate();
        return run_hash(config);
    });
    std::vector<std::string> diagnostics;

    const MacroPanel panel = in_stage(Stage::prepare, out, [&] {
        MacroPanel p = load_panel(config, &diagnostics);
        out.write("panel.csv", [&](std::ostream& os) { write_panel_csv(os, p); });
        out.write("descriptive_stats.csv", [&](std::ostream& os) { write_descriptive(os, p); });
        return p;
    });
    const auto write_diagnostics = [&] {
        out.write("diagnostics.txt", [&](std::ostream& os) {
            for (const auto& d : diagnostics) os << d << '\n';
        });
    };
    if (through == Stage::prepare) {
        write_diagnostics();
        return out.finish(hash);
    }

    const RuleContext ctx = in_stage(Stage::estimate, out, [&] {
        const Estimates e = estimate_models(panel, config);
        out.write("var_coefficients.csv", [&](std::ostream& os) { write_var_table(os, e.law); });
        out.write("skedastic_coefficients.csv",
                  [&](std::ostream& os) { write_skedastic_table(os, e.sked); });
        out.write("shocks.csv", [&](std::ostream& os) { write_shocks(os, e.shocks); });
        if (e.sked.floor_bindings > 0 || e.shocks.floor_bindings > 0) {
            diagnostics.push_back("skedastic floor binds at " +
                                  std::to_string(e.sked.floor_bindings) + " fitted states");
        }
        return make_rule_context(e, config);
    });

    if (through == Stage::validate_dp) {
        in_stage(Stage::validate_dp, out, [&] { write_qdp_outputs(out, panel, ctx, config); });
        write_diagnostics();
        return out.finish(hash);
    }
    if (through == Stage::estimate) {
        write_diagnostics();
        return out.finish(hash);
    }

    in_stage(Stage::rule, out, [&] {
        out.write("rule_representative.csv", [&](std::ostream& os) {
            write_rule_csv(os, panel, ctx, config.representative_taus);
        });
    });

    if (through == Stage::implied_tau) {
        in_stage(Stage::implied_tau, out, [&] {
            const ImpliedTauSeries series = implied_tau_series(panel, ctx, config.tau_grid);
            int invalid = 0;
            for (const auto& row : series.rows) {
                if (!row.valid) {
                    ++invalid;
                    diagnostics.push_back(row.quarter.to_string() + ": " + row.error);
                }
            }
            if (invalid > 0) {
                diagnostics.push_back(std::to_string(invalid) + " quarters without implied tau");
            }
            out.write("implied_tau.csv",
                      [&](std::ostream& os) { write_implied_tau_csv(os, series); });
            out.write("plot_data.csv", [&](std::ostream& os) {
                write_plot_data(os, panel, series, ctx, config.representative_taus);
            });
        });
    }
    write_diagnostics();
    return out.finish(hash);
}

Manifest run_robustness(const RunConfig& config) {
    OutputSet out(config.output_dir);
    fs::remove(out.dir() / "FAILED");
    std::vector<std::string> names{"baseline"};
    for (const auto& p : robustness_presets()) names.push_back(p);

    struct Row {
        std::string preset;
        double lambda, d_pi, d_y;
        PolicyState state;
    };
    std::vector<Row> rows;
    std::uint64_t h = fnv1a(canonical_text(config));
    for (const auto& name : names) {
        RunConfig c = config;
        apply_preset(c, name);
        c.output_dir = config.output_dir / name;
        const Manifest child = run_pipeline(c, Stage::implied_tau);
        out.adopt(child, name);
        h = fnv1a(child.hash, h);

        // Rule response to pi and y at the sample-median state, tau = 0.5.
        in_stage(Stage::rule, out, [&] {
            const MacroPanel panel = load_panel(c);
            const RuleContext ctx = make_rule_context(estimate_models(panel, c), c);
            const PolicyState s{empirical_quantile(panel.pi, 0.5), empirical_quantile(panel.y, 0.5),
                                empirical_quantile(panel.i, 0.5)};
            const double eps = 1e-3;
            const auto rate = [&](PolicyState x) { return optimal_rate(ctx, 0.5, x); };
            const double d_pi = (rate({s.pi + eps, s.y, s.i_prev}) - rate({s.pi - eps, s.y, s.i_prev})) / (2 * eps);
            const double d_y = (rate({s.pi, s.y + eps, s.i_prev}) - rate({s.pi, s.y - eps, s.i_prev})) / (2 * eps);
            rows.push_back({name, c.calib.lambda, d_pi, d_y, s});
        });
    }
    out.write("robustness_summary.csv", [&](std::ostream& os) {
        CsvWriter w(os);
        w.header({"preset", "lambda", "pi", "y", "i_prev", "di_dpi", "di_dy"});
        for (const auto& r : rows) {
            w.field(r.preset).field(r.lambda).field(r.state.pi).field(r.state.y)
                .field(r.state.i_prev).field(r.d_pi).field(r.d_y);
            w.end_row();
        }
    });
    return out.finish(hex64(h));
}

}  // namespace qtaylor
