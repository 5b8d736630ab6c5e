#include "qbeat/io.hpp"

#include <iomanip>
#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

#include "qbeat/error.hpp"

namespace qbeat::io {

std::string format_number(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

double parse_number(std::string_view text) {
    double x = 0.0;
    const auto* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, x);
    if (r.ec != std::errc{} || r.ptr != end)
        throw ParseError("number", "cannot parse '" + std::string(text) + "'");
    return x;
}

std::string trajectory_header() {
    std::string h = "t,V,N";
    for (std::size_t i = 0; i < kMomentCount; ++i) {
        const auto name = moment_name(static_cast<Moment>(i));
        h += ',';
        h += name;
        h += "_re,";
        h += name;
        h += "_im";
    }
    return h;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << trajectory_header() << '\n';
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        os << format_number(traj.times[k]) << ',' << format_number(traj.duan.at(k)) << ','
           << format_number(traj.photons.at(k));
        for (const auto& v : traj.states[k].values)
            os << ',' << format_number(v.real()) << ',' << format_number(v.imag());
        os << '\n';
    }
}

std::string sweep_header() {
    std::string h;
    for (auto name : param_names()) {
        h += name;
        h += ',';
    }
    h += "status,v_min,t_at_vmin,first_window_duration,first_window_open,n_max,t_at_nmax,"
         "max_real_eigenvalue,error";
    return h;
}

namespace {

std::string csv_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
    os << sweep_header() << '\n';
    for (const auto& row : rows) {
        for (auto name : param_names()) os << format_number(get_param(row.point, name)) << ',';
        os << status_name(row.status) << ',';
        if (row.status == RowStatus::ok) {
            os << format_number(row.v_min) << ',' << format_number(row.t_at_vmin) << ',';
            if (row.first_window_duration) os << format_number(*row.first_window_duration);
            os << ',' << (row.first_window_open ? 1 : 0) << ',' << format_number(row.n_max) << ','
               << format_number(row.t_at_nmax) << ',' << format_number(row.max_real_eigenvalue) << ',';
        } else {
            os << ",,,,,,,";
        }
        if (!row.error.empty()) os << csv_quote(row.error);
        os << '\n';
    }
}

nlohmann::ordered_json params_json(const ModelParams& p) {
    nlohmann::ordered_json j;
    for (auto name : param_names()) j[std::string(name)] = get_param(p, name);
    return j;
}

nlohmann::ordered_json window_json(const EntanglementWindow& w) {
    return {{"t_start", w.t_start}, {"t_end", w.t_end},   {"duration", w.duration()},
            {"v_min", w.v_min},     {"t_at_min", w.t_at_min}, {"open", w.open}};
}

nlohmann::ordered_json summary_json(const ModelParams& params, const RunSummary& summary,
                                    double max_real_eigenvalue, const RunGrid& grid) {
    nlohmann::ordered_json j;
    j["params"] = params_json(params);
    j["v_min"] = summary.v_min;
    j["t_at_vmin"] = summary.t_at_vmin;
    j["windows"] = nlohmann::ordered_json::array();
    for (const auto& w : summary.windows) j["windows"].push_back(window_json(w));
    j["n_max"] = summary.n_max;
    j["t_at_nmax"] = summary.t_at_nmax;
    j["max_real_eigenvalue"] = max_real_eigenvalue;
    j["method"] = std::string(method_name(grid.method));
    j["grid"] = {{"t_max", grid.t_max}, {"dt", grid.dt}, {"stride", grid.stride}};
    return j;
}

nlohmann::ordered_json spectral_json(const SpectralSummary& s) {
    nlohmann::ordered_json j;
    j["max_real_part"] = s.max_real_part;
    j["net_gain"] = s.net_gain;
    j["eigenvalues"] = nlohmann::ordered_json::array();
    for (const auto& e : s.eigenvalues) j["eigenvalues"].push_back({{"re", e.real()}, {"im", e.imag()}});
    return j;
}

void write_verify_report(std::ostream& os, const VerifyReport& report) {
    os << "== checks ==\n";
    for (const auto& c : report.checks) {
        const char* verdict = c.passed ? "PASS" : (c.hard ? "FAIL" : "NOTE");
        os << '[' << verdict << "] " << c.name << ": " << format_number(c.measured) << " (tol "
           << std::setprecision(3) << c.tolerance << (c.hard ? "" : ", diagnostic") << ')';
        if (!c.detail.empty()) os << " -- " << c.detail;
        os << '\n';
    }
    os << "== beta_oracle discrepancy (driven grid) ==\n";
    os << "gamma,P,omega_abs,phi,delta,gamma_a,dev_aa,dev_bb,dev_ab,dev_ba\n";
    for (const auto& r : report.beta_table) {
        const auto& p = r.point;
        os << format_number(p.gamma) << ',' << format_number(p.P) << ',' << format_number(p.omega_abs)
           << ',' << format_number(p.phi) << ',' << format_number(p.delta) << ','
           << format_number(p.gamma_a);
        for (double d : r.deviation) os << ',' << format_number(d);
        os << '\n';
    }
    os << (report.passed() ? "verify: all hard checks passed\n" : "verify: FAILED\n");
    for (const auto& c : report.checks)
        if (c.hard && !c.passed) os << "failed: " << c.name << '\n';
}

}  // namespace qbeat::io
