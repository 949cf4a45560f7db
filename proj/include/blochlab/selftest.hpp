#pragma once

// The acceptance suite behind the `selftest` CLI subcommand and the ctest
// acceptance binary: one entry per shipped criterion, each with pinned
// tolerances, printing a pass/fail table.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace blochlab {

struct CriterionResult {
    std::string id;
    std::string summary;
    bool pass = false;
    bool blocking = true;  // stretch items report without gating
    std::string detail;
    double seconds = 0.0;
};

struct SelftestOptions {
    std::string cli_path;    // path to the CLI binary for subprocess checks ("" = skip)
    std::string data_dir;    // shipped data files (best tile)
    std::string scratch_dir; // working space for artifacts
    bool verbose = true;
};

std::vector<CriterionResult> run_selftest(const SelftestOptions& opt);

// true when every blocking criterion passed
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace blochlab
