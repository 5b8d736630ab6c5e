#include "qbeat/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qbeat/error.hpp"

namespace qbeat {
namespace {

constexpr std::array<std::string_view, kMomentCount> kNames = {
    "m1", "m2", "m1d", "m2d", "n1", "n2", "c12d", "c1d2", "s12", "s11", "s22", "s12d", "s11d", "s22d"};

constexpr std::array<Moment, kMomentCount> kPartner = {
    Moment::m1d, Moment::m2d, Moment::m1,   Moment::m2,   Moment::n1,  Moment::n2,  Moment::c1d2,
    Moment::c12d, Moment::s12d, Moment::s11d, Moment::s22d, Moment::s12, Moment::s11, Moment::s22};

using Aug = Eigen::Matrix<cplx, kMomentCount + 1, kMomentCount + 1>;

Aug augmented(const DriftSystem& system, double t) {
    Aug g = Aug::Zero();
    g.topLeftCorner<kMomentCount, kMomentCount>() = system.generator * t;
    g.topRightCorner<kMomentCount, 1>() = system.inhomogeneity * t;
    return g;
}

}  // namespace

std::string_view moment_name(Moment m) { return kNames[index(m)]; }

Moment conjugate_partner(Moment m) { return kPartner[index(m)]; }

double MomentState::norm_inf() const {
    double n = 0.0;
    for (const auto& v : values) n = std::max(n, std::abs(v));
    return n;
}

bool MomentState::all_finite() const {
    return std::all_of(values.begin(), values.end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

double conjugate_pair_residual(const MomentState& state) {
    double worst = 0.0;
    for (std::size_t i = 0; i < kMomentCount; ++i) {
        const auto m = static_cast<Moment>(i);
        worst = std::max(worst, std::abs(state[conjugate_partner(m)] - std::conj(state[m])));
    }
    return worst / (1.0 + state.norm_inf());
}

MomentState coherent_initial_state(cplx alpha1, cplx alpha2) {
    MomentState s;
    s[Moment::m1] = alpha1;
    s[Moment::m2] = alpha2;
    s[Moment::m1d] = std::conj(alpha1);
    s[Moment::m2d] = std::conj(alpha2);
    s[Moment::n1] = std::norm(alpha1);
    s[Moment::n2] = std::norm(alpha2);
    s[Moment::c12d] = std::conj(alpha1) * alpha2;
    s[Moment::c1d2] = alpha1 * std::conj(alpha2);
    s[Moment::s12] = alpha1 * alpha2;
    s[Moment::s11] = alpha1 * alpha1;
    s[Moment::s22] = alpha2 * alpha2;
    s[Moment::s12d] = std::conj(s[Moment::s12]);
    s[Moment::s11d] = std::conj(s[Moment::s11]);
    s[Moment::s22d] = std::conj(s[Moment::s22]);
    return s;
}

DriftSystem build_drift(const AlphaMatrix& alphas, double kappa1, double kappa2) {
    DriftSystem sys;
    sys.alphas = alphas;
    sys.kappa1 = kappa1;
    sys.kappa2 = kappa2;

    const cplx a11 = alphas.a11, a12 = alphas.a12, a21 = alphas.a21, a22 = alphas.a22;
    const cplx a11c = std::conj(a11), a12c = std::conj(a12), a21c = std::conj(a21),
               a22c = std::conj(a22);
    const double k1 = kappa1, k2 = kappa2;

    auto& A = sys.generator;
    auto& b = sys.inhomogeneity;
    auto set = [&A](Moment row, Moment col, cplx v) {
        A(static_cast<Eigen::Index>(index(row)), static_cast<Eigen::Index>(index(col))) = v;
    };
    auto src = [&b](Moment row, cplx v) { b(static_cast<Eigen::Index>(index(row))) = v; };
    using enum Moment;

    // first moments
    set(m1, m1, -(a11 + k1));
    set(m1, m2, -a12);
    set(m2, m2, -(a22 + k2));
    set(m2, m1, -a21);
    set(m1d, m1d, -(a11c + k1));
    set(m1d, m2d, -a12c);
    set(m2d, m2d, -(a22c + k2));
    set(m2d, m1d, -a21c);

    // normally ordered second moments
    set(n1, n1, -(a11 + a11c + 2 * k1));
    set(n1, c12d, -a12);
    set(n1, c1d2, -a12c);
    src(n1, -(a11 + a11c));

    set(n2, n2, -(a22 + a22c + 2 * k2));
    set(n2, c12d, -a21c);
    set(n2, c1d2, -a21);
    src(n2, -(a22 + a22c));

    set(c12d, n1, -a21);
    set(c12d, n2, -a12c);
    set(c12d, c12d, -(a11c + a22 + k1 + k2));
    src(c12d, -(a12c + a21));

    set(c1d2, n1, -a21c);
    set(c1d2, n2, -a12);
    set(c1d2, c1d2, -(a11 + a22c + k1 + k2));
    src(c1d2, -(a12 + a21c));

    // anomalous moments
    set(s12, s11, -a21);
    set(s12, s22, -a12);
    set(s12, s12, -(a11 + a22 + k1 + k2));
    set(s11, s11, -2.0 * (a11 + k1));
    set(s11, s12, -2.0 * a12);
    set(s22, s22, -2.0 * (a22 + k2));
    set(s22, s12, -2.0 * a21);

    set(s12d, s11d, -a21c);
    set(s12d, s22d, -a12c);
    set(s12d, s12d, -(a11c + a22c + k1 + k2));
    set(s11d, s11d, -2.0 * (a11c + k1));
    set(s11d, s12d, -2.0 * a12c);
    set(s22d, s22d, -2.0 * (a22c + k2));
    set(s22d, s12d, -2.0 * a21c);
    return sys;
}

DriftSystem build_drift(const ModelParams& params) {
    const ModelParams p = validate_params(params);
    DriftSystem sys = build_drift(gain_matrix(p), p.kappa1, p.kappa2);
    sys.params = p;
    return sys;
}

MomentState step_rk4(const DriftSystem& system, const MomentState& state, double dt) {
    if (!(dt > 0)) throw InvalidParameter("dt", "must satisfy dt > 0");
    const auto& A = system.generator;
    const auto& b = system.inhomogeneity;
    const MomentVector& y = state.values;

    const MomentVector k1 = A * y + b;
    const MomentVector k2 = A * (y + (0.5 * dt) * k1) + b;
    const MomentVector k3 = A * (y + (0.5 * dt) * k2) + b;
    const MomentVector k4 = A * (y + dt * k3) + b;

    MomentState next;
    next.values = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.all_finite()) throw NonFiniteState(dt, "RK4 step produced a non-finite moment");
    return next;
}

ExactPropagator::ExactPropagator(const DriftSystem& system, double t) {
    if (!(t >= 0)) throw InvalidParameter("t", "must satisfy t >= 0");
    const Aug e = augmented(system, t).exp();
    transfer_ = e.topLeftCorner<kMomentCount, kMomentCount>();
    offset_ = e.topRightCorner<kMomentCount, 1>();
}

MomentState ExactPropagator::apply(const MomentState& state) const {
    MomentState out;
    out.values = transfer_ * state.values + offset_;
    return out;
}

MomentState propagate_exact(const DriftSystem& system, const MomentState& state, double t) {
    if (t == 0.0) return state;
    return ExactPropagator(system, t).apply(state);
}

std::string_view method_name(Method m) { return m == Method::rk4 ? "rk4" : "exact"; }

Method parse_method(std::string_view name) {
    if (name == "rk4") return Method::rk4;
    if (name == "exact") return Method::exact;
    throw InvalidParameter("method", "expected rk4 or exact, got '" + std::string(name) + "'");
}

long long step_count(const RunGrid& grid) {
    // Relative slack absorbs representation error in t_max/dt (e.g. 1/0.1).
    return static_cast<long long>(std::floor(grid.t_max / grid.dt * (1.0 + 1e-12)));
}

Trajectory simulate(const DriftSystem& system, const MomentState& initial, const RunGrid& grid) {
    if (!(grid.t_max > 0)) throw InvalidParameter("t_max", "must satisfy t_max > 0");
    if (!(grid.dt > 0)) throw InvalidParameter("dt", "must satisfy dt > 0");
    if (grid.stride < 1) throw InvalidParameter("stride", "must satisfy stride >= 1");

    const long long steps = step_count(grid);
    const long long samples = steps / grid.stride + 1;
    const double sample_dt = grid.dt * grid.stride;

    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(samples));
    traj.states.reserve(static_cast<std::size_t>(samples));
    traj.times.push_back(0.0);
    traj.states.push_back(initial);

    auto fail = [](double t) {
        std::ostringstream os;
        os << "moments became non-finite at t = " << t;
        throw NonFiniteState(t, os.str());
    };

    MomentState state = initial;
    if (grid.method == Method::exact) {
        const ExactPropagator prop(system, sample_dt);
        for (long long k = 1; k < samples; ++k) {
            state = prop.apply(state);
            const double t = static_cast<double>(k * grid.stride) * grid.dt;
            if (!state.all_finite()) fail(t);
            traj.times.push_back(t);
            traj.states.push_back(state);
        }
        return traj;
    }

    for (long long step = 1; step <= steps; ++step) {
        const double t = static_cast<double>(step) * grid.dt;
        try {
            state = step_rk4(system, state, grid.dt);
        } catch (const NonFiniteState&) {
            fail(t);
        }
        if (step % grid.stride == 0) {
            traj.times.push_back(t);
            traj.states.push_back(state);
        }
    }
    return traj;
}

}  // namespace qbeat
