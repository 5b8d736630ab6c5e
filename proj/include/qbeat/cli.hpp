#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qbeat/config.hpp"

namespace qbeat::cli {

enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailed = 1,
    kInvalidParameters = 2,
    kNumericalBlowUp = 3,
};

/// Parses `args` (args[0] is the program name). Returns nullopt when help
/// or version output was requested and printed to `out`.
/// Throws ParseError or InvalidParameter.
std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& out);

/// Writes trajectory.csv and summary.json into config.out_dir.
int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Writes sweep.csv (and trajectories/point_NNNN.csv with --trajectories).
int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Writes stability.json with the generator spectrum.
int run_stability(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Prints the verification report; exit 0 iff all hard checks pass.
int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full front end: parse, dispatch, map errors to exit codes.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbeat::cli
