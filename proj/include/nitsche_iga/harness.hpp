#pragma once

// Run configuration and the solve / convergence / calibrate studies.

#include "nitsche_iga/analysis.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace niga {

// Flat "key = value" configuration; '#' starts a comment.
struct RunConfig {
    std::string case_name;
    std::string geometry = "square";
    int degree = 0;
    int continuity = -1;  // at interior breakpoints; -1 means k-1
    std::vector<std::size_t> levels;  // spans per direction
    std::optional<double> epsilon;
    std::optional<double> epsilon_factor;
    std::optional<std::string> tau_rule;  // "h^k" or "h^<p>"
    std::optional<std::size_t> num_steps;
    double tau_scale = 1.0;
    std::optional<double> final_time;
    int quadrature_order = 0;
    double solver_tol = 1e-12;
    std::size_t solver_maxit = 0;
    bool freeze_operator = false;
    std::vector<double> snapshot_times;  // default: final time
    std::vector<double> calibrate_factors{0.5, 1.0, 1.25, 2.0};
    double mu_scale = 1.0;
    double c_scale = 1.0;
    std::string out_dir = "out";
    int threads = 1;

    static RunConfig parse(std::string_view text);
    static RunConfig load(const std::string& path);

    // Applies one key; throws ConfigError for unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    // Throws ConfigError naming the first missing or conflicting key.
    void validate() const;

    double effective_epsilon_factor() const { return epsilon_factor.value_or(1.25); }
    int tau_exponent() const;
};

// Everything needed to run one mesh level.
struct LevelSetup {
    std::size_t spans;
    ManufacturedCase mc;
    std::unique_ptr<Discretization> disc;
    PenaltyFloor floor;
    double epsilon;
    TimeGrid grid;
};

LevelSetup setup_level(const RunConfig& cfg, std::size_t spans, int threads);

struct StudyResult {
    std::string summary;
    std::vector<LevelRecord> levels;
    std::optional<RateTable> rates;
    std::vector<std::string> files;
};

StudyResult run_solve(const RunConfig& cfg);
StudyResult run_convergence(const RunConfig& cfg);
StudyResult run_calibrate(const RunConfig& cfg);

// command in {solve, convergence, calibrate}
StudyResult run_command(const std::string& command, const RunConfig& cfg);

}  // namespace niga
