#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "qbeat/analysis.hpp"
#include "qbeat/dynamics.hpp"
#include "qbeat/error.hpp"
#include "qbeat/harness.hpp"
#include "qbeat/model.hpp"

namespace py = pybind11;
using namespace qbeat;

namespace {

Eigen::MatrixXcd states_matrix(const Trajectory& t) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(t.states.size()), static_cast<Eigen::Index>(kMomentCount));
    for (std::size_t k = 0; k < t.states.size(); ++k) m.row(static_cast<Eigen::Index>(k)) = t.states[k].values.transpose();
    return m;
}

MomentState state_from(const std::vector<cplx>& v) {
    if (v.size() != kMomentCount) throw py::value_error("expected 14 moments");
    MomentState s;
    for (std::size_t i = 0; i < kMomentCount; ++i) s.values(static_cast<Eigen::Index>(i)) = v[i];
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Moment dynamics and Duan-criterion entanglement of a driven V-type quantum beat laser";

    auto base = py::register_exception<Error>(m, "Error");
    auto invalid = py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
    py::register_exception<OutOfRangeP>(m, "OutOfRangeP", invalid.ptr());
    auto degenerate = py::register_exception<DegenerateParameters>(m, "DegenerateParameters", base.ptr());
    py::register_exception<SingularSystem>(m, "SingularSystem", degenerate.ptr());
    py::register_exception<NonFiniteState>(m, "NonFiniteState", base.ptr());
    py::register_exception<NonPhysicalState>(m, "NonPhysicalState", base.ptr());

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](py::kwargs kw) {
            ModelParams p;
            for (auto item : kw) set_param(p, item.first.cast<std::string>(), item.second.cast<double>());
            return p;
        }))
        .def_readwrite("gamma", &ModelParams::gamma)
        .def_readwrite("P", &ModelParams::P)
        .def_readwrite("omega_abs", &ModelParams::omega_abs)
        .def_readwrite("phi", &ModelParams::phi)
        .def_readwrite("delta", &ModelParams::delta)
        .def_readwrite("gamma_a", &ModelParams::gamma_a)
        .def_readwrite("kappa1", &ModelParams::kappa1)
        .def_readwrite("kappa2", &ModelParams::kappa2)
        .def_readwrite("g1", &ModelParams::g1)
        .def_readwrite("g2", &ModelParams::g2)
        .def("__repr__", [](const ModelParams& p) {
            std::string s = "ModelParams(";
            for (auto name : param_names()) s += std::string(name) + "=" + std::to_string(get_param(p, name)) + ", ";
            s.resize(s.size() - 2);
            return s + ")";
        });

    py::class_<BetaSet>(m, "BetaSet")
        .def_readonly("beta_aa", &BetaSet::beta_aa)
        .def_readonly("beta_bb", &BetaSet::beta_bb)
        .def_readonly("beta_ab", &BetaSet::beta_ab)
        .def_readonly("beta_ba", &BetaSet::beta_ba)
        .def_readonly("d2", &BetaSet::d2);

    py::class_<AlphaMatrix>(m, "AlphaMatrix")
        .def(py::init<>())
        .def(py::init([](cplx a11, cplx a12, cplx a21, cplx a22) { return AlphaMatrix{a11, a12, a21, a22, cplx{}}; }),
             py::arg("a11"), py::arg("a12"), py::arg("a21"), py::arg("a22"))
        .def_readwrite("a11", &AlphaMatrix::a11)
        .def_readwrite("a12", &AlphaMatrix::a12)
        .def_readwrite("a21", &AlphaMatrix::a21)
        .def_readwrite("a22", &AlphaMatrix::a22)
        .def_readonly("d1", &AlphaMatrix::d1);

    m.def("validate_params", &validate_params);
    m.def("interference_rate", &interference_rate, py::arg("gamma"), py::arg("P"));
    m.def("atomic_betas", &atomic_betas);
    m.def("gain_matrix", &gain_matrix);
    m.def("alpha_oracle", &alpha_oracle);
    m.def("beta_oracle", [](const ModelParams& p) {
        const auto r = beta_oracle(p);
        return py::make_tuple(r.solved, r.max_deviation);
    });

    m.attr("MOMENT_NAMES") = [] {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < kMomentCount; ++i) names.emplace_back(moment_name(static_cast<Moment>(i)));
        return names;
    }();

    m.def("coherent_initial_state", [](cplx a1, cplx a2) {
        const auto s = coherent_initial_state(a1, a2);
        return std::vector<cplx>(s.values.begin(), s.values.end());
    }, py::arg("alpha1"), py::arg("alpha2"));

    py::class_<DriftSystem>(m, "DriftSystem")
        .def_property_readonly("generator", [](const DriftSystem& s) { return Eigen::MatrixXcd(s.generator); })
        .def_property_readonly("inhomogeneity", [](const DriftSystem& s) { return Eigen::VectorXcd(s.inhomogeneity); })
        .def_readonly("alphas", &DriftSystem::alphas);

    m.def("build_drift", py::overload_cast<const ModelParams&>(&build_drift));
    m.def("build_drift_from_alphas", py::overload_cast<const AlphaMatrix&, double, double>(&build_drift),
          py::arg("alphas"), py::arg("kappa1"), py::arg("kappa2"));

    m.def("propagate_exact", [](const DriftSystem& s, const std::vector<cplx>& v, double t) {
        const auto out = propagate_exact(s, state_from(v), t);
        return std::vector<cplx>(out.values.begin(), out.values.end());
    });

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("duan", &Trajectory::duan)
        .def_readonly("photons", &Trajectory::photons)
        .def_property_readonly("states", &states_matrix);

    py::class_<EntanglementWindow>(m, "EntanglementWindow")
        .def_readonly("t_start", &EntanglementWindow::t_start)
        .def_readonly("t_end", &EntanglementWindow::t_end)
        .def_readonly("v_min", &EntanglementWindow::v_min)
        .def_readonly("t_at_min", &EntanglementWindow::t_at_min)
        .def_readonly("open", &EntanglementWindow::open)
        .def_property_readonly("duration", &EntanglementWindow::duration);

    m.def("simulate", [](const DriftSystem& sys, const std::vector<cplx>& initial, double t_max, double dt,
                         int stride, const std::string& method) {
        RunGrid grid{t_max, dt, stride, parse_method(method)};
        Trajectory traj;
        {
            py::gil_scoped_release release;
            traj = simulate(sys, state_from(initial), grid);
            annotate(traj);
        }
        return traj;
    }, py::arg("system"), py::arg("initial"), py::arg("t_max") = 10.0, py::arg("dt") = 1e-3,
       py::arg("stride") = 10, py::arg("method") = "rk4");

    m.def("duan_variance", [](const std::vector<cplx>& v) { return duan_variance(state_from(v)); });
    m.def("total_photon_number", [](const std::vector<cplx>& v) { return total_photon_number(state_from(v)); });
    m.def("entanglement_windows", [](const std::vector<double>& t, const std::vector<double>& v) {
        return entanglement_windows(t, v);
    });

    py::class_<SpectralSummary>(m, "SpectralSummary")
        .def_readonly("eigenvalues", &SpectralSummary::eigenvalues)
        .def_readonly("max_real_part", &SpectralSummary::max_real_part)
        .def_readonly("net_gain", &SpectralSummary::net_gain);
    m.def("spectral_summary", &spectral_summary);

    m.def("run_sweep", [](const ModelParams& base, const std::vector<std::pair<std::string, std::vector<double>>>& axes,
                          double t_max, double dt, int stride, const std::string& method, unsigned threads) {
        SweepSpec spec;
        spec.base = base;
        for (const auto& [name, values] : axes) spec.axes.push_back({name, values});
        spec.run = {t_max, dt, stride, parse_method(method)};
        spec.threads = threads;
        std::vector<SweepRow> rows;
        {
            py::gil_scoped_release release;
            rows = run_sweep(spec);
        }
        py::list out;
        for (const auto& r : rows) {
            py::dict d;
            for (auto name : param_names()) d[py::str(std::string(name))] = get_param(r.point, name);
            d["status"] = std::string(status_name(r.status));
            d["error"] = r.error;
            d["v_min"] = r.v_min;
            d["t_at_vmin"] = r.t_at_vmin;
            d["first_window_duration"] = r.first_window_duration;
            d["first_window_open"] = r.first_window_open;
            d["n_max"] = r.n_max;
            d["t_at_nmax"] = r.t_at_nmax;
            d["max_real_eigenvalue"] = r.max_real_eigenvalue;
            out.append(d);
        }
        return out;
    }, py::arg("base"), py::arg("axes"), py::arg("t_max") = 10.0, py::arg("dt") = 1e-3, py::arg("stride") = 10,
       py::arg("method") = "rk4", py::arg("threads") = 1);

    m.def("run_verification", [](std::uint64_t seed) {
        const auto report = run_verification({.seed = seed});
        py::list checks;
        for (const auto& c : report.checks) {
            py::dict d;
            d["name"] = c.name;
            d["hard"] = c.hard;
            d["passed"] = c.passed;
            d["measured"] = c.measured;
            d["tolerance"] = c.tolerance;
            checks.append(d);
        }
        return py::make_tuple(report.passed(), checks);
    }, py::arg("seed") = kDefaultSeed);
}
