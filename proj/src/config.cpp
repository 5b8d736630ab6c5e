#include "qbeat/config.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "qbeat/error.hpp"
#include "qbeat/io.hpp"

namespace qbeat {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(io::parse_number(trim(item)));
    return out;
}

}  // namespace

cplx parse_amplitude(const std::string& text) {
    const auto v = parse_list(text);
    if (v.size() == 1) return {v[0], 0.0};
    if (v.size() == 2) return {v[0], v[1]};
    throw ParseError("amplitude", "expected 're' or 're,im', got '" + text + "'");
}

SweepAxis parse_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ParseError("axis", "expected NAME=v1,v2,..., got '" + text + "'");
    SweepAxis axis;
    axis.name = normalize_key(trim(text.substr(0, eq)));
    axis.values = parse_list(text.substr(eq + 1));
    if (axis.values.empty()) throw ParseError("axis", "axis '" + axis.name + "' has no values");
    return axis;
}

void apply_config_file(RunConfig& config, std::istream& in, const std::string& origin) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = origin + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(where, "expected 'key = value'");
        const std::string key = normalize_key(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));

        try {
            if (key == "alpha1") {
                config.alpha1 = parse_amplitude(value);
            } else if (key == "alpha2") {
                config.alpha2 = parse_amplitude(value);
            } else if (key == "t_max") {
                config.run.t_max = io::parse_number(value);
            } else if (key == "dt") {
                config.run.dt = io::parse_number(value);
            } else if (key == "stride") {
                config.run.stride = static_cast<int>(io::parse_number(value));
            } else if (key == "method") {
                config.run.method = parse_method(value);
            } else if (key == "axis") {
                config.axes.push_back(parse_axis(value));
            } else if (key == "out") {
                config.out_dir = value;
                config.out_given = true;
            } else if (key == "seed") {
                config.seed = static_cast<std::uint64_t>(std::stoull(value, nullptr, 0));
            } else if (key == "threads") {
                config.threads = static_cast<unsigned>(std::stoul(value));
            } else {
                set_param(config.params, key, io::parse_number(value));
            }
        } catch (const ParseError& e) {
            throw ParseError(where + " (" + key + ")", e.what());
        } catch (const InvalidParameter& e) {
            throw ParseError(where + " (" + key + ")", e.what());
        } catch (const std::logic_error& e) {
            throw ParseError(where + " (" + key + ")", "bad value '" + value + "'");
        }
    }
}

void validate_config(const RunConfig& config) {
    validate_params(config.params);
    if (!(config.run.t_max > 0)) throw InvalidParameter("t_max", "must satisfy t_max > 0");
    if (!(config.run.dt > 0)) throw InvalidParameter("dt", "must satisfy dt > 0");
    if (config.run.stride < 1) throw InvalidParameter("stride", "must satisfy stride >= 1");
}

}  // namespace qbeat
