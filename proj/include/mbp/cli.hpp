#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mbp/json_io.hpp"

namespace mbp {

/// Exit status contract of the command-line tool.
enum ExitCode : int { kExitPass = 0, kExitVerifyFail = 1, kExitNumerical = 2, kExitBadInput = 3 };

struct GridSpec {
    int n_r = 128;
    int n_theta = 512;
    double r_max = 0.95;
    /// PDE grid: n x n nodes on the disk of radius r.
    int n = 257;
    double r = 0.75;
};

struct JobConfig {
    std::string command;
    std::string input_path;
    /// JSON report; empty writes to the output stream.
    std::string output_path;
    /// Grid values for metric, curvature and pde-oracle.
    std::string csv_path;
    GridSpec grid;
    HomotopyConfig tolerances;
    std::uint64_t seed = 1;
    int competitors = 1000;
    int n_max = 8;
    std::vector<double> radii{0.9, 0.99, 0.999};
    std::optional<Complex> zeta;

    /// Throws DomainError on an unknown command, non-positive grid sizes or r_max >= 1.
    void validate() const;
};

const std::vector<std::string>& cli_commands();

/// Applies the keys of a JSON job file onto cfg.
void apply_job_json(const Json& job, JobConfig& cfg);

/// "n_r,n_theta,r_max" or "n,r".
void apply_grid_override(const std::string& text, GridSpec& grid);

/// "newton_tol=1e-12,roundtrip_tol=1e-8".
void apply_tol_override(const std::string& text, HomotopyConfig& cfg);

/// Runs one job. The report always carries the tolerances used and a
/// "pass" flag; diagnostics go to `err`.
int run(const JobConfig& cfg, std::ostream& out, std::ostream& err);

/// Command-line entry point.
int run_cli(int argc, char** argv);

}  // namespace mbp
