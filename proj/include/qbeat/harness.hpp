#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbeat/analysis.hpp"
#include "qbeat/dynamics.hpp"
#include "qbeat/model.hpp"

namespace qbeat {

inline constexpr std::uint64_t kDefaultSeed = 0xB3A7;
inline constexpr std::size_t kDefaultGridPoints = 100;
inline constexpr std::size_t kDefaultSweepCap = 10'000;

// ---------------------------------------------------------------------------
// Oracles

/// Alpha coefficients from a direct 2x2 steady-state solve of the
/// first-order coherence equations (rho_cc = 0), independent of the closed
/// forms. Throws SingularSystem if the system or its beta input degenerates.
AlphaMatrix alpha_oracle(const ModelParams& params);

struct BetaOracleResult {
    BetaSet solved;       ///< d2 holds the determinant of the 4x4 system
    BetaSet closed_form;  ///< atomic_betas() at the same point
    std::array<double, 4> deviation;  ///< aa, bb, ab, ba relative deviations
    double max_deviation;
};

/// Steady state of the zeroth-order atomic equations with pump injection
/// gamma_a into rho_aa, compared against atomic_betas().
BetaOracleResult beta_oracle(const ModelParams& params);

/// |a - b| / max(|a|, |b|), zero when both vanish.
double relative_error(cplx a, cplx b);

/// Largest entrywise relative error between two alpha matrices.
double max_relative_error(const AlphaMatrix& a, const AlphaMatrix& b);

/// Max over samples of conjugate_pair_residual.
double hermiticity_residual(const Trajectory& traj);

/// max_k ||a_k - b_k||_inf / ||b_k||_inf over samples; trajectories must
/// share the time grid.
double trajectory_deviation(const Trajectory& a, const Trajectory& b);

/// Reproducible pseudo-random parameter points spanning gamma in [0.5,2],
/// P in [0,0.9], |Omega| in [0,20], Delta in [-10,10], gamma_a in [1,10],
/// phi in [0,2pi). Remaining fields keep their defaults.
std::vector<ModelParams> parameter_grid(std::uint64_t seed, std::size_t count = kDefaultGridPoints);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepAxis {
    std::string name;  ///< one of gamma, P, delta, omega_abs, phi, kappa1, kappa2, gamma_a
    std::vector<double> values;
};

/// Sets the named field on `p`; throws InvalidParameter for unknown names.
void set_param(ModelParams& p, std::string_view name, double value);
double get_param(const ModelParams& p, std::string_view name);
/// Field names in declaration order.
const std::vector<std::string_view>& param_names();

struct SweepSpec {
    ModelParams base;
    std::vector<SweepAxis> axes;
    cplx alpha1{10.0, 0.0};
    cplx alpha2{-10.0, 0.0};
    RunGrid run;
    std::size_t max_points = kDefaultSweepCap;
    unsigned threads = 1;
    bool keep_trajectories = false;
};

enum class RowStatus { ok, invalid_parameter, degenerate, non_finite };

std::string_view status_name(RowStatus s);

struct SweepRow {
    ModelParams point;
    RowStatus status = RowStatus::ok;
    std::string error;
    double v_min = 0.0;
    double t_at_vmin = 0.0;
    std::optional<double> first_window_duration;
    bool first_window_open = false;
    double n_max = 0.0;
    double t_at_nmax = 0.0;
    double max_real_eigenvalue = 0.0;
    std::optional<Trajectory> trajectory;
};

/// Cartesian grid points in lexicographic axis order (first axis slowest).
std::vector<ModelParams> expand_grid(const SweepSpec& spec);

/// Runs the full pipeline for one point; errors are captured in the row.
SweepRow run_point(const ModelParams& point, const SweepSpec& spec);

/// One row per grid point, in expand_grid order regardless of `threads`.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// ---------------------------------------------------------------------------
// Verification

struct VerifyOptions {
    std::uint64_t seed = kDefaultSeed;
    std::size_t grid_points = kDefaultGridPoints;
    /// Test hook: negates the closed-form alphas before comparison.
    bool flip_alpha_sign = false;
};

struct VerifyCheck {
    std::string name;
    bool hard;
    bool passed;
    double measured;
    double tolerance;
    std::string detail;
};

struct BetaDiscrepancy {
    ModelParams point;
    std::array<double, 4> deviation;
    double max_deviation;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    std::vector<BetaDiscrepancy> beta_table;

    bool passed() const;
};

VerifyReport run_verification(const VerifyOptions& options = {});

}  // namespace qbeat
