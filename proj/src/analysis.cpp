#include "qbeat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qbeat/error.hpp"

namespace qbeat {
namespace {

void require_physical(const MomentState& state) {
    const double r = conjugate_pair_residual(state);
    if (!(r <= kPhysicalTolerance)) {
        std::ostringstream os;
        os << "conjugate-pair residual " << r << " exceeds " << kPhysicalTolerance;
        throw NonPhysicalState(os.str());
    }
}

}  // namespace

DuanEvaluation evaluate_duan(const MomentState& s) {
    require_physical(s);
    using enum Moment;
    const cplx bracket = 1.0 + s[n1] + s[n2] + s[s12] + s[s12d] - s[m1] * s[m1d] - s[m2] * s[m2d] -
                         s[m1] * s[m2] - s[m1d] * s[m2d];
    return {2.0 * bracket.real(), 2.0 * std::abs(bracket.imag())};
}

double duan_variance(const MomentState& state) { return evaluate_duan(state).value; }

double total_photon_number(const MomentState& state) {
    require_physical(state);
    return state[Moment::n1].real() + state[Moment::n2].real();
}

double annotate(Trajectory& traj) {
    traj.duan.resize(traj.states.size());
    traj.photons.resize(traj.states.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto d = evaluate_duan(traj.states[i]);
        traj.duan[i] = d.value;
        traj.photons[i] = total_photon_number(traj.states[i]);
        worst = std::max(worst, d.imaginary_residual);
    }
    return worst;
}

std::vector<EntanglementWindow> entanglement_windows(std::span<const double> times,
                                                     std::span<const double> duan) {
    if (times.size() != duan.size())
        throw std::invalid_argument("entanglement_windows: times and values differ in length");

    std::vector<EntanglementWindow> out;
    const std::size_t n = times.size();
    // Time at which the segment [i-1, i] crosses the bound.
    auto crossing = [&](std::size_t i) {
        const double v0 = duan[i - 1], v1 = duan[i];
        const double f = (kDuanBound - v0) / (v1 - v0);
        return times[i - 1] + f * (times[i] - times[i - 1]);
    };

    std::size_t i = 0;
    while (i < n) {
        if (!(duan[i] < kDuanBound)) {
            ++i;
            continue;
        }
        EntanglementWindow w{};
        w.t_start = i == 0 ? times[0] : crossing(i);
        w.v_min = duan[i];
        w.t_at_min = times[i];
        std::size_t j = i;
        while (j < n && duan[j] < kDuanBound) {
            if (duan[j] < w.v_min) {
                w.v_min = duan[j];
                w.t_at_min = times[j];
            }
            ++j;
        }
        if (j == n) {
            w.t_end = times[n - 1];
            w.open = true;
        } else {
            w.t_end = crossing(j);
        }
        out.push_back(w);
        i = j;
    }
    return out;
}

std::vector<EntanglementWindow> entanglement_windows(const Trajectory& traj) {
    return entanglement_windows(traj.times, traj.duan);
}

std::optional<double> RunSummary::first_window_duration() const {
    if (windows.empty()) return std::nullopt;
    return windows.front().duration();
}

RunSummary summarize(const Trajectory& traj) {
    if (traj.duan.size() != traj.times.size() || traj.times.empty())
        throw std::invalid_argument("summarize: trajectory is empty or not annotated");
    RunSummary s{};
    const auto vmin = std::min_element(traj.duan.begin(), traj.duan.end());
    const auto nmax = std::max_element(traj.photons.begin(), traj.photons.end());
    s.v_min = *vmin;
    s.t_at_vmin = traj.times[static_cast<std::size_t>(vmin - traj.duan.begin())];
    s.n_max = *nmax;
    s.t_at_nmax = traj.times[static_cast<std::size_t>(nmax - traj.photons.begin())];
    s.windows = entanglement_windows(traj);
    return s;
}

SpectralSummary spectral_summary(const DriftSystem& system) {
    Eigen::ComplexEigenSolver<GeneratorMatrix> solver(system.generator, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver did not converge");

    SpectralSummary out;
    const auto& ev = solver.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    out.max_real_part = out.eigenvalues.front().real();
    out.net_gain = out.max_real_part > 0.0;
    return out;
}

}  // namespace qbeat
