#include "qbeat/model.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "qbeat/error.hpp"

namespace qbeat {
namespace {

void require(bool ok, const char* field, const char* bound, double value) {
    if (!ok) {
        std::ostringstream os;
        os << "must satisfy " << bound << " (got " << value << ")";
        throw InvalidParameter(field, os.str());
    }
}

constexpr cplx I{0.0, 1.0};

}  // namespace

ModelParams validate_params(const ModelParams& raw) {
    const auto finite = [](double x) { return std::isfinite(x); };
    require(finite(raw.gamma) && raw.gamma > 0, "gamma", "gamma > 0", raw.gamma);
    if (!(raw.P >= 0.0 && raw.P <= 1.0)) {
        std::ostringstream os;
        os << "must satisfy 0 <= P <= 1 (got " << raw.P << ")";
        throw OutOfRangeP(os.str());
    }
    require(finite(raw.omega_abs) && raw.omega_abs >= 0, "omega_abs", "omega_abs >= 0",
            raw.omega_abs);
    require(finite(raw.phi) && raw.phi >= 0 && raw.phi < 2 * std::numbers::pi, "phi",
            "0 <= phi < 2*pi", raw.phi);
    require(finite(raw.delta), "delta", "finite delta", raw.delta);
    require(finite(raw.gamma_a) && raw.gamma_a > 0, "gamma_a", "gamma_a > 0", raw.gamma_a);
    require(finite(raw.kappa1) && raw.kappa1 >= 0, "kappa1", "kappa1 >= 0", raw.kappa1);
    require(finite(raw.kappa2) && raw.kappa2 >= 0, "kappa2", "kappa2 >= 0", raw.kappa2);
    require(finite(raw.g1) && raw.g1 > 0, "g1", "g1 > 0", raw.g1);
    require(finite(raw.g2) && raw.g2 > 0, "g2", "g2 > 0", raw.g2);
    return raw;
}

double interference_rate(double gamma, double P) { return P * gamma; }

BetaSet atomic_betas(const ModelParams& params) {
    const double R = params.gamma;
    const double g12 = interference_rate(params.gamma, params.P);
    const cplx W = params.omega();
    const cplx Wc = std::conj(W);
    const double W2 = params.omega_abs * params.omega_abs;
    const double R2 = R * R;

    const cplx d2 = 4 * R2 * R2 + 4 * R2 * W2 - 4 * R2 * g12 * g12 -
                    g12 * g12 * (W + Wc) * (W + Wc);
    if (std::abs(d2) <= kDegeneracyTolerance) {
        std::ostringstream os;
        os << "|D2| = " << std::abs(d2) << " <= " << kDegeneracyTolerance
           << " (gamma=" << R << ", P=" << params.P << ", |Omega|=" << params.omega_abs << ")";
        throw DegenerateParameters(os.str());
    }

    const double pump = R * params.gamma_a;
    BetaSet b;
    b.d2 = d2;
    b.beta_aa = (2 * R2 - g12 * g12 + W2) * pump / d2;
    b.beta_bb = (g12 + I * W) * (g12 - I * Wc) * pump / d2;
    // The coherences carry gamma_a alone: with the extra factor R the
    // expressions are not dimensionless and disagree with the zeroth-order
    // steady state whenever gamma != 1.
    b.beta_ab = -(g12 + I * W) * (2 * R2 - I * g12 * W - I * g12 * Wc) * params.gamma_a / (2.0 * d2);
    b.beta_ba = -(g12 - I * Wc) * (2 * R2 + I * g12 * W + I * g12 * Wc) * params.gamma_a / (2.0 * d2);
    return b;
}

AlphaMatrix gain_matrix(const ModelParams& params) {
    const BetaSet b = atomic_betas(params);
    const double R = params.gamma;
    const double g12 = interference_rate(params.gamma, params.P);
    const cplx W = params.omega();
    const cplx Wc = std::conj(W);
    const cplx diag = R + I * params.delta;

    AlphaMatrix a;
    a.d1 = diag * diag - (I * W - g12) * (I * Wc - g12);
    if (std::abs(a.d1) <= kDegeneracyTolerance) {
        std::ostringstream os;
        os << "|D1| = " << std::abs(a.d1) << " <= " << kDegeneracyTolerance;
        throw DegenerateParameters(os.str());
    }
    const double g11 = params.g1 * params.g1;
    const double g1g2 = params.g1 * params.g2;
    const double g22 = params.g2 * params.g2;
    a.a11 = -g11 * (diag * b.beta_aa + (I * W - g12) * b.beta_ba) / a.d1;
    a.a12 = -g1g2 * (diag * b.beta_ab + (I * W - g12) * b.beta_bb) / a.d1;
    a.a22 = -g22 * (diag * b.beta_bb + (I * Wc - g12) * b.beta_ab) / a.d1;
    a.a21 = -g1g2 * (diag * b.beta_ba + (I * Wc - g12) * b.beta_aa) / a.d1;
    return a;
}

}  // namespace qbeat
