#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbeat/harness.hpp"

namespace qbeat {

enum class Mode { simulate, sweep, stability, verify };

/// Fully resolved command-line run: defaults, then config file, then flags.
struct RunConfig {
    Mode mode = Mode::simulate;
    ModelParams params;
    cplx alpha1{10.0, 0.0};
    cplx alpha2{-10.0, 0.0};
    RunGrid run;
    std::filesystem::path out_dir = "out";
    bool out_given = false;
    std::vector<SweepAxis> axes;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;
    bool write_trajectories = false;
    bool fault_flip_alpha = false;
};

/// Reads `key = value` lines ('#' starts a comment) onto `config`.
/// Keys are the long flag names without dashes prefix; '_' and '-' are
/// interchangeable. Throws ParseError naming file and line.
void apply_config_file(RunConfig& config, std::istream& in, const std::string& origin);

/// Parses "re" or "re,im".
cplx parse_amplitude(const std::string& text);

/// Parses "NAME=v1,v2,...".
SweepAxis parse_axis(const std::string& text);

/// Checks parameters and run grid; throws InvalidParameter.
void validate_config(const RunConfig& config);

}  // namespace qbeat
