#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qbeat/analysis.hpp"
#include "qbeat/dynamics.hpp"
#include "qbeat/error.hpp"
#include "qbeat/harness.hpp"

using namespace qbeat;
using enum Moment;

namespace {

DriftSystem decoupled_system() {
    AlphaMatrix a{};
    a.a11 = {-1.25, 1.25};
    return build_drift(a, 1e-3, 1e-3);
}

double max_abs_diff(const MomentState& a, const MomentState& b) {
    return (a.values - b.values).cwiseAbs().maxCoeff();
}

cplx entry(const DriftSystem& s, Moment r, Moment c) {
    return s.generator(static_cast<Eigen::Index>(index(r)), static_cast<Eigen::Index>(index(c)));
}

cplx source(const DriftSystem& s, Moment r) { return s.inhomogeneity(static_cast<Eigen::Index>(index(r))); }

}  // namespace

TEST_CASE("coherent_initial_state") {
    const auto s = coherent_initial_state(10.0, -10.0);
    CHECK(s[n1] == cplx(100));
    CHECK(s[n2] == cplx(100));
    CHECK(s[s12] == cplx(-100));
    CHECK(s[c12d] == cplx(-100));
    CHECK(s[m1] == cplx(10));
    CHECK(s[m2] == cplx(-10));
    CHECK(conjugate_pair_residual(s) == 0.0);

    CHECK(coherent_initial_state(0.0, 0.0).norm_inf() == 0.0);

    const auto t = coherent_initial_state(cplx(0, 3), 4.0);
    CHECK(t[s11] == cplx(-9));
    CHECK(t[s12] == cplx(0, 12));
    CHECK(t[n1] == cplx(9));
}

TEST_CASE("moment names and partners") {
    CHECK(moment_name(c1d2) == "c1d2");
    for (std::size_t i = 0; i < kMomentCount; ++i) {
        const auto m = static_cast<Moment>(i);
        CHECK(conjugate_partner(conjugate_partner(m)) == m);
    }
    CHECK(conjugate_partner(n1) == n1);
    CHECK(conjugate_partner(s12) == s12d);
}

TEST_CASE("build_drift in the decoupled limit") {
    const auto sys = decoupled_system();
    CHECK(std::abs(entry(sys, m1, m1) - cplx(1.249, -1.25)) < 1e-15);
    for (std::size_t j = 1; j < kMomentCount; ++j) CHECK(sys.generator(0, static_cast<Eigen::Index>(j)) == cplx{});
}

TEST_CASE("build_drift reads the moment equations") {
    const auto a = gain_matrix(ModelParams{});
    const auto sys = build_drift(a, 0.002, 0.003);
    CHECK(source(sys, n1) == cplx(-2.0 * a.a11.real(), 0.0));
    CHECK(source(sys, n2) == -(a.a22 + std::conj(a.a22)));
    CHECK(source(sys, c12d) == -(std::conj(a.a12) + a.a21));
    CHECK(source(sys, c1d2) == -(a.a12 + std::conj(a.a21)));

    CHECK(entry(sys, s12, s12) == -(a.a11 + a.a22 + 0.002 + 0.003));
    CHECK(entry(sys, s12, s11) == -a.a21);
    CHECK(entry(sys, s12, s22) == -a.a12);
    int nonzero = 0;
    for (Eigen::Index j = 0; j < 14; ++j) nonzero += sys.generator(static_cast<Eigen::Index>(index(s12)), j) != cplx{};
    CHECK(nonzero == 3);

    CHECK(entry(sys, s11, s12) == -2.0 * a.a12);
    CHECK(entry(sys, n2, c12d) == -std::conj(a.a21));
    CHECK(entry(sys, c12d, n2) == -std::conj(a.a12));
}

TEST_CASE("drift structure invariants") {
    for (const auto& p : parameter_grid(5, 30)) {
        const auto sys = build_drift(p);
        for (Eigen::Index i = 0; i < 14; ++i) {
            int nz = 0;
            for (Eigen::Index j = 0; j < 14; ++j) nz += sys.generator(i, j) != cplx{};
            CHECK(nz <= 3);
            const auto row = static_cast<Moment>(i);
            const bool sourced = row == n1 || row == n2 || row == c12d || row == c1d2;
            if (!sourced) CHECK(sys.inhomogeneity(i) == cplx{});
            // conjugate-partner rows are entrywise conjugates under the pairing
            const auto pr = conjugate_partner(row);
            for (std::size_t j = 0; j < kMomentCount; ++j) {
                const auto col = static_cast<Moment>(j);
                CHECK(entry(sys, pr, conjugate_partner(col)) == std::conj(entry(sys, row, col)));
            }
            CHECK(source(sys, pr) == std::conj(source(sys, row)));
        }
    }
}

TEST_CASE("step_rk4") {
    const auto start = coherent_initial_state(cplx(1, 2), cplx(-3, 0.5));
    const DriftSystem null{};
    CHECK(step_rk4(null, start, 0.1).values == start.values);
    CHECK_THROWS_AS(step_rk4(null, start, 0.0), InvalidParameter);

    SUBCASE("decoupled analytic solution") {
        const auto sys = decoupled_system();
        auto s = coherent_initial_state(10.0, -10.0);
        for (int i = 0; i < 1000; ++i) s = step_rk4(sys, s, 1e-3);
        const cplx expected = 10.0 * std::exp(-(cplx(-1.25, 1.25) + 1e-3) * 1.0);
        CHECK(std::abs(s[m1] - expected) / std::abs(expected) < 1e-9);
    }

    SUBCASE("single step agrees with the exact propagator") {
        const auto sys = build_drift(ModelParams{});
        const auto s0 = coherent_initial_state(10.0, -10.0);
        const auto rk = step_rk4(sys, s0, 1e-3);
        const auto ex = propagate_exact(sys, s0, 1e-3);
        CHECK(max_abs_diff(rk, ex) <= 1e-12 * s0.norm_inf());
    }

    SUBCASE("non-finite results are reported") {
        AlphaMatrix a{};
        a.a11 = -1e200;
        const auto sys = build_drift(a, 0.0, 0.0);
        CHECK_THROWS_AS(step_rk4(sys, coherent_initial_state(1e200, 0.0), 1.0), NonFiniteState);
    }
}

TEST_CASE("propagate_exact") {
    const auto sys = build_drift(ModelParams{});
    const auto s0 = coherent_initial_state(10.0, -10.0);
    CHECK(propagate_exact(sys, s0, 0.0).values == s0.values);

    SUBCASE("decoupled analytic solution") {
        const auto dec = decoupled_system();
        const auto s = propagate_exact(dec, s0, 2.0);
        const cplx expected = 10.0 * std::exp(-(cplx(-1.25, 1.25) + 1e-3) * 2.0);
        CHECK(std::abs(s[m1] - expected) / std::abs(expected) < 1e-12);
    }

    SUBCASE("semigroup") {
        const auto once = propagate_exact(sys, s0, 5.0);
        const auto twice = propagate_exact(sys, propagate_exact(sys, s0, 2.5), 2.5);
        CHECK(max_abs_diff(once, twice) / once.norm_inf() < 1e-10);
    }

    SUBCASE("matches an independent long-double Taylor propagator") {
        for (const auto& p : parameter_grid(9, 10)) {
            const auto s = build_drift(p);
            for (double t : {0.3, 2.0, 7.0}) {
                const auto a = propagate_exact(s, s0, t);
                const auto b = testing::taylor_propagate(s, s0, t);
                CHECK(max_abs_diff(a, b) / b.norm_inf() < 1e-11);
            }
        }
    }

    SUBCASE("linearity of the homogeneous part") {
        DriftSystem hom = sys;
        hom.inhomogeneity.setZero();
        std::mt19937_64 rng(3);
        for (int i = 0; i < 10; ++i) {
            const auto m = testing::random_physical_state(rng);
            const cplx c(0.7, -1.3);
            MomentState scaled;
            scaled.values = c * m.values;
            const auto lhs = propagate_exact(hom, scaled, 3.0);
            MomentState rhs;
            rhs.values = c * propagate_exact(hom, m, 3.0).values;
            CHECK(max_abs_diff(lhs, rhs) / rhs.norm_inf() < 1e-14);
        }
    }
}

TEST_CASE("simulate grid and initial identities") {
    const DriftSystem null{};
    const auto traj = simulate(null, coherent_initial_state(1.0, 1.0), {1.0, 0.1, 1, Method::rk4});
    REQUIRE(traj.times.size() == 11);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t k = 1; k < traj.times.size(); ++k) CHECK(traj.times[k] > traj.times[k - 1]);

    const auto ex = simulate(null, coherent_initial_state(1.0, 1.0), {1.0, 0.1, 3, Method::exact});
    CHECK(ex.times.size() == 4);

    CHECK_THROWS_AS(simulate(null, {}, {0.0, 0.1, 1, Method::rk4}), InvalidParameter);
    CHECK_THROWS_AS(simulate(null, {}, {1.0, -0.1, 1, Method::rk4}), InvalidParameter);
    CHECK_THROWS_AS(simulate(null, {}, {1.0, 0.1, 0, Method::rk4}), InvalidParameter);
}

TEST_CASE("simulate: RK4 and exact agree along the reference trajectory") {
    const auto sys = build_drift(ModelParams{});
    const auto s0 = coherent_initial_state(10.0, -10.0);
    auto rk = simulate(sys, s0, {10.0, 1e-3, 10, Method::rk4});
    const auto ex = simulate(sys, s0, {10.0, 1e-3, 10, Method::exact});
    REQUIRE(rk.times.size() == 1001);
    REQUIRE(rk.times == ex.times);
    annotate(rk);
    CHECK(rk.duan.front() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(rk.photons.front() == doctest::Approx(200.0).epsilon(1e-15));
    CHECK(trajectory_deviation(rk, ex) < 1e-6);
    CHECK(hermiticity_residual(rk) < 1e-8);
    for (const auto& s : rk.states) {
        const double scale = 1.0 + s.norm_inf();
        CHECK(std::abs(s[n1].imag()) / scale < 1e-8);
        CHECK(std::abs(s[n2].imag()) / scale < 1e-8);
    }
}

TEST_CASE("simulate reports the blow-up time") {
    ModelParams p;
    p.delta = 10.0;
    const auto sys = build_drift(p);
    try {
        simulate(sys, coherent_initial_state(10.0, -10.0), {1000.0, 1e-2, 10, Method::rk4});
        FAIL("expected NonFiniteState");
    } catch (const NonFiniteState& e) {
        CHECK(e.time() > 10.0);
        CHECK(e.time() < 1000.0);
    }
}

TEST_CASE("method names") {
    CHECK(parse_method("rk4") == Method::rk4);
    CHECK(parse_method("exact") == Method::exact);
    CHECK(method_name(Method::exact) == "exact");
    CHECK_THROWS_AS(parse_method("euler"), InvalidParameter);
}

TEST_CASE("anomalous covariances have no source and stay factorized") {
    const auto sys = build_drift(ModelParams{});
    for (Moment k : {Moment::s12, Moment::s11, Moment::s22, Moment::s12d, Moment::s11d, Moment::s22d})
        CHECK(sys.inhomogeneity[index(k)] == cplx(0.0));

    RunGrid grid;
    grid.method = Method::exact;
    const auto traj = simulate(sys, coherent_initial_state(10.0, -10.0), grid);
    double worst = 0.0;
    for (const auto& s : traj.states) {
        worst = std::max(worst, std::abs(s[Moment::s12] - s[Moment::m1] * s[Moment::m2]) / std::abs(s[Moment::s12]));
        worst = std::max(worst, std::abs(s[Moment::s11] - s[Moment::m1] * s[Moment::m1]) / std::abs(s[Moment::s11]));
    }
    CHECK(worst < 1e-9);
}
