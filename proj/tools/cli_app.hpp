#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wavecert::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kSuccess = 0,
    kValidationError = 1,
    /// A checked property failed (bound exceeded, reconstruction mismatch, ...).
    kPropertyViolation = 2,
};

/// Fully resolved run configuration. Every field can come from the JSON
/// config file under the same name as its flag (dashes become underscores).
struct RunConfig {
    std::string command;

    std::string case_name = "bump";
    std::string p0_table;

    int imax = 100;
    std::optional<int> kmax;
    std::optional<double> dt;
    double tmax = 1.0;
    double xi = 0.1;
    double c = 1.0;

    std::string oracle = "auto";
    double oracle_threshold = 5e4;
    bool allow_fallback = false;
    std::string reconstruct = "auto";
    bool exact = false;

    std::optional<double> alpha3;
    std::optional<double> C3;
    std::optional<double> alpha4;
    std::optional<double> C4;

    std::vector<int> imax_list{50, 100, 200, 400};
    bool self_test = false;

    double dx_min = 1e-7;
    double dx_max = 1e-1;
    double dt_min = 1e-7;
    double dt_max = 1e-1;
    int nx = 40;
    int nt = 40;
    std::vector<int> line_imax{10, 20, 40, 80, 160, 320, 640, 1280};
    bool optimum = false;
    int optimum_levels = 65;

    std::string out;
    std::string csv;
    std::string line_csv;
    std::string field_csv;
};

/// Runs the tool on `args` (without the program name). The JSON summary goes
/// to `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wavecert::cli
