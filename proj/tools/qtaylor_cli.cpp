// Command-line front end: one subcommand per pipeline stage.
#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "qtaylor/config.hpp"
#include "qtaylor/errors.hpp"
#include "qtaylor/pipeline.hpp"

namespace {

qtaylor::RunConfig build_config(const std::string& path, const std::vector<std::string>& sets) {
    qtaylor::RunConfig config = path.empty() ? qtaylor::RunConfig{} : qtaylor::load_config(path);
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw qtaylor::ConfigError("--set expects key=value, got '" + s + "'");
        qtaylor::apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
    return config;
}

void report(const qtaylor::Manifest& m) {
    std::cout << "hash " << m.hash << '\n';
    for (const auto& f : m.files) std::cout << (m.output_dir / f).string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantile-preference Taylor rule pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    app.add_option("-c,--config", config_path, "key = value configuration file");
    app.add_option("-s,--set", sets, "override one setting, key=value (repeatable)");

    struct Command {
        const char* name;
        const char* help;
        qtaylor::Stage stage;
    };
    const Command commands[] = {
        {"prepare", "load raw series and build the quarterly panel", qtaylor::Stage::prepare},
        {"estimate", "fit the VAR(1), skedastic functions and shocks", qtaylor::Stage::estimate},
        {"rule", "optimal rates at the representative quantiles", qtaylor::Stage::rule},
        {"implied-tau", "implied quantile index for every quarter", qtaylor::Stage::implied_tau},
        {"validate-dp", "compare the closed-form rule with the quantile DP",
         qtaylor::Stage::validate_dp},
    };
    std::vector<std::pair<CLI::App*, qtaylor::Stage>> stage_commands;
    for (const auto& c : commands) stage_commands.emplace_back(app.add_subcommand(c.name, c.help), c.stage);
    CLI::App* robustness = app.add_subcommand("robustness", "baseline plus every preset");

    CLI11_PARSE(app, argc, argv);

    try {
        const qtaylor::RunConfig config = build_config(config_path, sets);
        if (robustness->parsed()) {
            report(qtaylor::run_robustness(config));
            return 0;
        }
        for (const auto& [sub, stage] : stage_commands) {
            if (sub->parsed()) report(qtaylor::run_pipeline(config, stage));
        }
        return 0;
    } catch (const qtaylor::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const qtaylor::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const qtaylor::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
