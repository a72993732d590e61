#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace filmhomog {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitValidation = 2,
    kExitNumerical = 3,
    kExitAssert = 4,
};

struct CliOptions {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    bool assert_thresholds = false;
    std::optional<double> tolerance;
    bool green_4pi = false;
};

/// Runs one subcommand (potential, converge, gauge, moments) and maps
/// library errors onto exit codes. Diagnostics go to `log`.
int run(const std::string& subcommand, const CliOptions& opt, std::ostream& log);

/// argv front end used by the executable.
int cli_main(int argc, char** argv);

}  // namespace filmhomog
