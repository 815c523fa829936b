#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qtaylor/config.hpp"
#include "qtaylor/ingest.hpp"
#include "qtaylor/regress.hpp"
#include "qtaylor/rule.hpp"
#include "qtaylor/skedastic.hpp"

namespace qtaylor {

enum class Stage { prepare, estimate, rule, implied_tau, validate_dp };

std::string to_string(Stage stage);

struct Estimates {
    LawOfMotion law;
    SkedasticModel sked;
    ShockPanel shocks;
};

struct Manifest {
    std::filesystem::path output_dir;
    std::string hash;                         // 16 hex digits
    std::vector<std::filesystem::path> files;  // relative to output_dir
};

/// 64-bit FNV-1a, continued from `state`.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

/// Hash of the canonical config text followed by the bytes of every input file.
std::string run_hash(const RunConfig& config);

/// Steps 1-3 as library calls, without writing anything.
MacroPanel load_panel(const RunConfig& config, std::vector<std::string>* warnings = nullptr);
Estimates estimate_models(const MacroPanel& panel, const RunConfig& config);
RuleContext make_rule_context(const Estimates& estimates, const RunConfig& config);

/// Runs the stages up to and including `through` (validate_dp runs
/// prepare, estimate and the DP comparison) and writes their tables under
/// config.output_dir together with manifest.txt. On failure a FAILED file
/// names the stage and cause, partial outputs stay in place, and the error
/// is rethrown with the stage name prefixed.
Manifest run_pipeline(const RunConfig& config, Stage through = Stage::implied_tau);

/// Baseline plus every robustness preset, each in its own subdirectory,
/// and a summary comparing the rule across runs.
Manifest run_robustness(const RunConfig& config);

}  // namespace qtaylor
