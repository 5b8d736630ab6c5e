#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qbeat/analysis.hpp"
#include "qbeat/harness.hpp"

namespace qbeat::io {

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_number(double x);

/// Inverse of format_number; throws ParseError on trailing garbage.
double parse_number(std::string_view text);

/// Columns: t, V, N, then re/im of the 14 moments in canonical order.
std::string trajectory_header();
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

std::string sweep_header();
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

nlohmann::ordered_json params_json(const ModelParams& p);
nlohmann::ordered_json window_json(const EntanglementWindow& w);

/// Summary schema: params, v_min, t_at_vmin, windows[], n_max, t_at_nmax,
/// max_real_eigenvalue, method, grid{t_max, dt, stride}.
nlohmann::ordered_json summary_json(const ModelParams& params, const RunSummary& summary,
                                    double max_real_eigenvalue, const RunGrid& grid);

nlohmann::ordered_json spectral_json(const SpectralSummary& s);

void write_verify_report(std::ostream& os, const VerifyReport& report);

}  // namespace qbeat::io
