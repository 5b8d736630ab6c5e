#pragma once

#include <complex>
#include <numbers>

namespace qbeat {

using cplx = std::complex<double>;

/// Threshold on |D1| and |D2| below which the steady-state coefficients are
/// treated as undefined.
inline constexpr double kDegeneracyTolerance = 1e-9;

/// Physical parameters of the driven V-type atom and the two cavity modes.
/// All rates, detunings and couplings are in units of the mode coupling g.
/// Defaults reproduce the reference operating point (P = 0.5, |Omega| = 10,
/// Delta = 1, gamma_a = 5, kappa = 0.001, phi = pi/2).
struct ModelParams {
    double gamma = 1.0;      ///< atomic decay rate, gamma1 = gamma2 = R
    double P = 0.5;          ///< dipole alignment factor cos(theta)
    double omega_abs = 10.0; ///< |Omega|, drive between the upper levels
    double phi = std::numbers::pi / 2;
    double delta = 1.0;      ///< common detuning Delta1 = Delta2
    double gamma_a = 5.0;    ///< pump rate into |a>
    double kappa1 = 1e-3;
    double kappa2 = 1e-3;
    double g1 = 1.0;
    double g2 = 1.0;

    cplx omega() const { return std::polar(omega_abs, phi); }

    bool operator==(const ModelParams&) const = default;
};

/// Zeroth-order atomic density-matrix elements in the absence of the fields.
struct BetaSet {
    cplx beta_aa;
    cplx beta_bb;
    cplx beta_ab;
    cplx beta_ba;
    cplx d2;
};

/// Gain / cross-coupling coefficients of the reduced field master equation.
/// Each entry already carries its g1^2, g1 g2 or g2^2 prefactor.
struct AlphaMatrix {
    cplx a11;
    cplx a12;
    cplx a21;
    cplx a22;
    cplx d1;
};

/// Checks every parameter bound and returns the input unchanged.
/// Throws OutOfRangeP for P outside [0,1] and InvalidParameter otherwise.
ModelParams validate_params(const ModelParams& raw);

/// gamma12 = P sqrt(gamma1 gamma2) with gamma1 = gamma2 = gamma.
double interference_rate(double gamma, double P);

/// Closed-form steady state of the undriven-field atomic populations and
/// coherences. Throws DegenerateParameters when |D2| <= kDegeneracyTolerance.
BetaSet atomic_betas(const ModelParams& params);

/// Closed-form alpha coefficients. Throws DegenerateParameters when either
/// D1 or D2 is degenerate.
AlphaMatrix gain_matrix(const ModelParams& params);

}  // namespace qbeat
