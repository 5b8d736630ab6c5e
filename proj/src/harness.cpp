#include "qbeat/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "qbeat/error.hpp"

namespace qbeat {
namespace {

constexpr cplx I{0.0, 1.0};

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

}  // namespace

AlphaMatrix alpha_oracle(const ModelParams& params) {
    BetaSet beta;
    try {
        beta = atomic_betas(params);
    } catch (const DegenerateParameters& e) {
        throw SingularSystem(std::string("zeroth-order populations undefined: ") + e.what());
    }
    const double g12 = interference_rate(params.gamma, params.P);
    const cplx W = params.omega();
    constexpr double rho_cc = 0.0;

    // i d/dt (rho_ac, rho_bc) = M (rho_ac, rho_bc) - S (a1, a2) with
    // S = [[g1 (b_aa - rho_cc), g2 b_ab], [g1 b_ba, g2 (b_bb - rho_cc)]].
    Eigen::Matrix2cd M;
    M << params.delta - I * params.gamma, -I * g12 - W,
         -I * g12 - std::conj(W), params.delta - I * params.gamma;
    Eigen::Matrix2cd S;
    S << params.g1 * (beta.beta_aa - rho_cc), params.g2 * beta.beta_ab,
         params.g1 * beta.beta_ba, params.g2 * (beta.beta_bb - rho_cc);

    const cplx det = M.determinant();
    if (std::abs(det) <= kDegeneracyTolerance) {
        std::ostringstream os;
        os << "first-order coherence system determinant " << std::abs(det) << " <= "
           << kDegeneracyTolerance;
        throw SingularSystem(os.str());
    }
    // Rows: coefficients of (a1, a2) in rho_ac and rho_bc.
    const Eigen::Matrix2cd rho = M.partialPivLu().solve(S);

    AlphaMatrix out;
    out.a11 = I * params.g1 * rho(0, 0);
    out.a12 = I * params.g1 * rho(0, 1);
    out.a21 = I * params.g2 * rho(1, 0);
    out.a22 = I * params.g2 * rho(1, 1);
    out.d1 = -det;
    return out;
}

BetaOracleResult beta_oracle(const ModelParams& params) {
    const double g = params.gamma;
    const double g12 = interference_rate(params.gamma, params.P);
    const cplx W = params.omega();
    const cplx Wc = std::conj(W);

    // Unknowns (rho_aa, rho_bb, rho_ab, rho_ba); i d/dt x = M x + c.
    Eigen::Matrix4cd M;
    M << -2.0 * I * g, 0.0, -I * g12 + Wc, -I * g12 - W,
         0.0, -2.0 * I * g, -I * g12 - Wc, -I * g12 + W,
         -I * g12 + W, -I * g12 - W, -2.0 * I * g, 0.0,
         -I * g12 - Wc, -I * g12 + Wc, 0.0, -2.0 * I * g;
    Eigen::Vector4cd c = Eigen::Vector4cd::Zero();
    c(0) = I * params.gamma_a;

    const auto lu = M.partialPivLu();
    const cplx det = lu.determinant();
    if (std::abs(det) <= kDegeneracyTolerance) {
        std::ostringstream os;
        os << "zeroth-order system determinant " << std::abs(det) << " <= " << kDegeneracyTolerance;
        throw SingularSystem(os.str());
    }
    const Eigen::Vector4cd x = lu.solve(-c);

    BetaOracleResult r{};
    r.solved = {x(0), x(1), x(2), x(3), det};
    r.closed_form = atomic_betas(params);
    r.deviation = {relative_error(r.solved.beta_aa, r.closed_form.beta_aa),
                   relative_error(r.solved.beta_bb, r.closed_form.beta_bb),
                   relative_error(r.solved.beta_ab, r.closed_form.beta_ab),
                   relative_error(r.solved.beta_ba, r.closed_form.beta_ba)};
    r.max_deviation = *std::max_element(r.deviation.begin(), r.deviation.end());
    return r;
}

double relative_error(cplx a, cplx b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

double max_relative_error(const AlphaMatrix& a, const AlphaMatrix& b) {
    return std::max({relative_error(a.a11, b.a11), relative_error(a.a12, b.a12),
                     relative_error(a.a21, b.a21), relative_error(a.a22, b.a22)});
}

double hermiticity_residual(const Trajectory& traj) {
    double worst = 0.0;
    for (const auto& s : traj.states) worst = std::max(worst, conjugate_pair_residual(s));
    return worst;
}

double trajectory_deviation(const Trajectory& a, const Trajectory& b) {
    if (a.states.size() != b.states.size())
        throw std::invalid_argument("trajectory_deviation: sample counts differ");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k) {
        MomentState diff;
        diff.values = a.states[k].values - b.states[k].values;
        const double scale = b.states[k].norm_inf();
        const double d = diff.norm_inf();
        worst = std::max(worst, scale > 0.0 ? d / scale : d);
    }
    return worst;
}

std::vector<ModelParams> parameter_grid(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::vector<ModelParams> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        ModelParams p;
        p.gamma = uniform(rng, 0.5, 2.0);
        p.P = uniform(rng, 0.0, 0.9);
        p.omega_abs = uniform(rng, 0.0, 20.0);
        p.delta = uniform(rng, -10.0, 10.0);
        p.gamma_a = uniform(rng, 1.0, 10.0);
        p.phi = uniform(rng, 0.0, 2 * std::numbers::pi);
        grid.push_back(p);
    }
    return grid;
}

// ---------------------------------------------------------------------------

const std::vector<std::string_view>& param_names() {
    static const std::vector<std::string_view> names = {
        "gamma", "P", "omega_abs", "phi", "delta", "gamma_a", "kappa1", "kappa2", "g1", "g2"};
    return names;
}

namespace {

double* field(ModelParams& p, std::string_view name) {
    if (name == "gamma") return &p.gamma;
    if (name == "P") return &p.P;
    if (name == "omega_abs") return &p.omega_abs;
    if (name == "phi") return &p.phi;
    if (name == "delta") return &p.delta;
    if (name == "gamma_a") return &p.gamma_a;
    if (name == "kappa1") return &p.kappa1;
    if (name == "kappa2") return &p.kappa2;
    if (name == "g1") return &p.g1;
    if (name == "g2") return &p.g2;
    return nullptr;
}

bool sweepable(std::string_view name) { return name != "g1" && name != "g2"; }

}  // namespace

void set_param(ModelParams& p, std::string_view name, double value) {
    double* f = field(p, name);
    if (!f) throw InvalidParameter(std::string(name), "unknown parameter");
    *f = value;
}

double get_param(const ModelParams& p, std::string_view name) {
    ModelParams copy = p;
    const double* f = field(copy, name);
    if (!f) throw InvalidParameter(std::string(name), "unknown parameter");
    return *f;
}

std::string_view status_name(RowStatus s) {
    switch (s) {
        case RowStatus::ok: return "ok";
        case RowStatus::invalid_parameter: return "InvalidParameter";
        case RowStatus::degenerate: return "DegenerateParameters";
        case RowStatus::non_finite: return "NonFiniteState";
    }
    return "unknown";
}

std::vector<ModelParams> expand_grid(const SweepSpec& spec) {
    std::size_t total = 1;
    for (const auto& axis : spec.axes) {
        if (!field(const_cast<ModelParams&>(spec.base), axis.name) || !sweepable(axis.name))
            throw InvalidParameter(axis.name, "not a sweepable parameter");
        if (axis.values.empty()) throw InvalidParameter(axis.name, "axis has no values");
        total *= axis.values.size();
        if (total > spec.max_points) {
            std::ostringstream os;
            os << "sweep grid exceeds cap of " << spec.max_points << " points";
            throw InvalidParameter("axes", os.str());
        }
    }

    std::vector<ModelParams> points;
    points.reserve(total);
    std::vector<std::size_t> idx(spec.axes.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
        ModelParams p = spec.base;
        for (std::size_t a = 0; a < spec.axes.size(); ++a)
            set_param(p, spec.axes[a].name, spec.axes[a].values[idx[a]]);
        points.push_back(p);
        // odometer increment, last axis fastest
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            if (++idx[a] < spec.axes[a].values.size()) break;
            idx[a] = 0;
        }
    }
    return points;
}

SweepRow run_point(const ModelParams& point, const SweepSpec& spec) {
    SweepRow row;
    row.point = point;
    try {
        const DriftSystem sys = build_drift(point);
        Trajectory traj = simulate(sys, coherent_initial_state(spec.alpha1, spec.alpha2), spec.run);
        annotate(traj);
        const RunSummary summary = summarize(traj);
        row.v_min = summary.v_min;
        row.t_at_vmin = summary.t_at_vmin;
        row.n_max = summary.n_max;
        row.t_at_nmax = summary.t_at_nmax;
        row.first_window_duration = summary.first_window_duration();
        row.first_window_open = !summary.windows.empty() && summary.windows.front().open;
        row.max_real_eigenvalue = spectral_summary(sys).max_real_part;
        if (spec.keep_trajectories) row.trajectory = std::move(traj);
    } catch (const DegenerateParameters& e) {
        row.status = RowStatus::degenerate;
        row.error = e.what();
    } catch (const NonFiniteState& e) {
        row.status = RowStatus::non_finite;
        row.error = e.what();
    } catch (const InvalidParameter& e) {
        row.status = RowStatus::invalid_parameter;
        row.error = e.what();
    }
    return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    const std::vector<ModelParams> points = expand_grid(spec);
    std::vector<SweepRow> rows(points.size());

    const unsigned workers =
        std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(points.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < points.size(); ++i) rows[i] = run_point(points[i], spec);
        return rows;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < points.size(); i = next++) {
                    try {
                        rows[i] = run_point(points[i], spec);
                    } catch (...) {
                        if (!failed.exchange(true)) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

// ---------------------------------------------------------------------------

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const VerifyCheck& c) { return !c.hard || c.passed; });
}

VerifyReport run_verification(const VerifyOptions& options) {
    VerifyReport report;
    auto add = [&](std::string name, bool hard, double measured, double tol, std::string detail = {}) {
        report.checks.push_back({std::move(name), hard, measured < tol, measured, tol, std::move(detail)});
    };

    const auto grid = parameter_grid(options.seed, options.grid_points);

    {
        double worst = 0.0;
        std::size_t skipped = 0;
        for (const auto& p : grid) {
            AlphaMatrix closed, oracle;
            try {
                closed = gain_matrix(p);
                oracle = alpha_oracle(p);
            } catch (const DegenerateParameters&) {
                ++skipped;
                continue;
            }
            if (options.flip_alpha_sign) {
                closed.a11 = -closed.a11;
                closed.a12 = -closed.a12;
                closed.a21 = -closed.a21;
                closed.a22 = -closed.a22;
            }
            worst = std::max(worst, max_relative_error(closed, oracle));
        }
        std::ostringstream os;
        os << grid.size() - skipped << " points, " << skipped << " degenerate skipped";
        add("gain_matrix vs alpha_oracle", true, worst, 1e-10, os.str());
    }

    {
        double worst = 0.0;
        for (auto p : grid) {
            p.omega_abs = 0.0;
            worst = std::max(worst, beta_oracle(p).max_deviation);
        }
        add("atomic_betas vs beta_oracle (Omega = 0)", true, worst, 1e-10);
    }

    {
        double worst = 0.0;
        for (const auto& p : grid) {
            const auto r = beta_oracle(p);
            report.beta_table.push_back({p, r.deviation, r.max_deviation});
            worst = std::max(worst, r.max_deviation);
        }
        add("atomic_betas vs beta_oracle (driven, diagnostic)", false, worst, 1e-10);
    }

    const ModelParams reference{};
    const DriftSystem sys = build_drift(reference);
    const MomentState start = coherent_initial_state(10.0, -10.0);
    RunGrid rk{10.0, 1e-3, 10, Method::rk4};
    RunGrid ex = rk;
    ex.method = Method::exact;
    const Trajectory t_rk = simulate(sys, start, rk);
    const Trajectory t_ex = simulate(sys, start, ex);

    add("RK4 vs exact propagator (t in [0,10])", true, trajectory_deviation(t_rk, t_ex), 1e-6);
    add("hermiticity residual, RK4", true, hermiticity_residual(t_rk), 1e-8);
    add("hermiticity residual, exact", true, hermiticity_residual(t_ex), 1e-10);

    {
        const MomentState once = propagate_exact(sys, start, 5.0);
        const MomentState twice = propagate_exact(sys, propagate_exact(sys, start, 2.5), 2.5);
        MomentState diff;
        diff.values = once.values - twice.values;
        add("exact propagator semigroup", true, diff.norm_inf() / once.norm_inf(), 1e-10);
    }

    {
        ModelParams p = reference;
        p.omega_abs = 0.0;
        p.P = 0.0;
        const DriftSystem dec = build_drift(p);
        const cplx rate = -(dec.alphas.a11 + p.kappa1);
        double worst = 0.0;
        for (double t : {1.0, 2.0, 5.0}) {
            const cplx expected = 10.0 * std::exp(rate * t);
            const MomentState s = propagate_exact(dec, start, t);
            worst = std::max(worst, relative_error(s[Moment::m1], expected));
        }
        add("decoupled limit <a1(t)> analytic", true, worst, 1e-8);
    }
    return report;
}

}  // namespace qbeat
