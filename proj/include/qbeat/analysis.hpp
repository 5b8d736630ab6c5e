#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qbeat/dynamics.hpp"

namespace qbeat {

/// Relative conjugate-pair tolerance accepted by the observables.
inline constexpr double kPhysicalTolerance = 1e-6;
/// Imaginary residuals of V above this are reported.
inline constexpr double kImaginaryReportThreshold = 1e-8;
/// Entanglement threshold for the Duan variance: V < 2.
inline constexpr double kDuanBound = 2.0;

struct DuanEvaluation {
    double value;              ///< real part of the variance expression
    double imaginary_residual; ///< |Im| of the same expression
};

/// Total variance of u = x1 + x2 and v = p1 - p2 from the moments.
/// Throws NonPhysicalState if conjugate-pair consistency is violated.
DuanEvaluation evaluate_duan(const MomentState& state);
double duan_variance(const MomentState& state);

/// <a1^dag a1> + <a2^dag a2>.
double total_photon_number(const MomentState& state);

/// Fills traj.duan and traj.photons. Returns the largest imaginary residual
/// of the Duan expression along the trajectory.
double annotate(Trajectory& traj);

struct EntanglementWindow {
    double t_start;
    double t_end;
    double v_min;
    double t_at_min;
    bool open = false;  ///< still entangled at the last sample

    double duration() const { return t_end - t_start; }
};

/// Maximal intervals on which V < 2, with endpoints linearly interpolated.
std::vector<EntanglementWindow> entanglement_windows(std::span<const double> times,
                                                     std::span<const double> duan);
std::vector<EntanglementWindow> entanglement_windows(const Trajectory& traj);

/// Scalar figures of merit of an annotated trajectory.
struct RunSummary {
    double v_min;
    double t_at_vmin;
    double n_max;
    double t_at_nmax;
    std::vector<EntanglementWindow> windows;

    /// Duration of the first window, if the run ever entangles.
    std::optional<double> first_window_duration() const;
};

RunSummary summarize(const Trajectory& traj);

struct SpectralSummary {
    std::vector<cplx> eigenvalues;  ///< by descending real part, then imaginary part
    double max_real_part;
    bool net_gain;
};

SpectralSummary spectral_summary(const DriftSystem& system);

}  // namespace qbeat
