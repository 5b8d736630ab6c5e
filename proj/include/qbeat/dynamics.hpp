#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qbeat/model.hpp"

namespace qbeat {

/// Canonical ordering of the field moments.
enum class Moment : std::size_t {
    m1,    ///< <a1>
    m2,    ///< <a2>
    m1d,   ///< <a1^dag>
    m2d,   ///< <a2^dag>
    n1,    ///< <a1^dag a1>
    n2,    ///< <a2^dag a2>
    c12d,  ///< <a1^dag a2>
    c1d2,  ///< <a1 a2^dag>
    s12,   ///< <a1 a2>
    s11,   ///< <a1 a1>
    s22,   ///< <a2 a2>
    s12d,  ///< <a1^dag a2^dag>
    s11d,  ///< <a1^dag a1^dag>
    s22d,  ///< <a2^dag a2^dag>
};

inline constexpr std::size_t kMomentCount = 14;

constexpr std::size_t index(Moment m) { return static_cast<std::size_t>(m); }

/// Short column name ("m1", "n2", ...).
std::string_view moment_name(Moment m);

/// Moment holding the expectation of the adjoint operator, e.g. m1 <-> m1d,
/// c12d <-> c1d2. Photon numbers pair with themselves.
Moment conjugate_partner(Moment m);

using MomentVector = Eigen::Matrix<cplx, kMomentCount, 1>;
using GeneratorMatrix = Eigen::Matrix<cplx, kMomentCount, kMomentCount>;

/// The 14 first- and second-order field moments.
struct MomentState {
    MomentVector values = MomentVector::Zero();

    cplx& operator[](Moment m) { return values(static_cast<Eigen::Index>(index(m))); }
    const cplx& operator[](Moment m) const { return values(static_cast<Eigen::Index>(index(m))); }

    double norm_inf() const;
    bool all_finite() const;
};

/// Largest violation of conjugate-pair consistency (m1d = conj(m1), ...,
/// real photon numbers), normalised by 1 + ||state||_inf.
double conjugate_pair_residual(const MomentState& state);

/// Moments of the product coherent state |alpha1, alpha2>.
MomentState coherent_initial_state(cplx alpha1, cplx alpha2);

/// Affine generator dM/dt = A M + b of the moment equations.
struct DriftSystem {
    GeneratorMatrix generator = GeneratorMatrix::Zero();
    MomentVector inhomogeneity = MomentVector::Zero();
    AlphaMatrix alphas{};
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    std::optional<ModelParams> params;
};

DriftSystem build_drift(const AlphaMatrix& alphas, double kappa1, double kappa2);

/// Validates the parameters, evaluates gain_matrix and assembles the drift.
DriftSystem build_drift(const ModelParams& params);

/// One classical RK4 step. Throws NonFiniteState if the result is not finite.
MomentState step_rk4(const DriftSystem& system, const MomentState& state, double dt);

/// Exact solution at time t through the exponential of the augmented
/// 15x15 generator [[A, b], [0, 0]].
MomentState propagate_exact(const DriftSystem& system, const MomentState& state, double t);

/// Precomputed exact propagator for a fixed time step.
class ExactPropagator {
public:
    ExactPropagator(const DriftSystem& system, double t);

    MomentState apply(const MomentState& state) const;

private:
    GeneratorMatrix transfer_;
    MomentVector offset_;
};

enum class Method { rk4, exact };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

/// Time grid of a simulation: samples at multiples of stride*dt up to t_max.
struct RunGrid {
    double t_max = 10.0;
    double dt = 1e-3;
    int stride = 10;
    Method method = Method::rk4;
};

/// Number of integration steps covered by the grid (floor(t_max/dt)).
long long step_count(const RunGrid& grid);

/// Time-sampled moments plus per-sample Duan variance and photon number
/// (the latter two are filled by annotate()).
struct Trajectory {
    std::vector<double> times;
    std::vector<MomentState> states;
    std::vector<double> duan;
    std::vector<double> photons;
};

/// Integrates from `initial` at t = 0. The first sample is the initial
/// state. Throws NonFiniteState carrying the failure time.
Trajectory simulate(const DriftSystem& system, const MomentState& initial, const RunGrid& grid);

}  // namespace qbeat
