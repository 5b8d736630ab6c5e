#include "qbeat/cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qbeat/error.hpp"
#include "qbeat/io.hpp"

namespace qbeat::cli {
namespace {

struct FlagValues {
    std::optional<double> gamma, P, omega_abs, phi, delta, gamma_a, kappa1, kappa2, g1, g2;
    std::optional<std::string> alpha1, alpha2;
    std::optional<double> t_max, dt;
    std::optional<int> stride;
    std::optional<std::string> method;
    std::vector<std::string> axes;
    std::optional<std::string> out;
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    bool trajectories = false;
    bool fault_flip_alpha = false;
};

void add_common(CLI::App* app, FlagValues& f) {
    app->add_option("--gamma", f.gamma, "atomic decay rate gamma (units of g)");
    app->add_option("--P", f.P, "dipole alignment factor in [0,1]");
    app->add_option("--omega-abs", f.omega_abs, "drive magnitude |Omega|");
    app->add_option("--phi", f.phi, "drive phase in [0, 2pi)");
    app->add_option("--delta", f.delta, "detuning Delta");
    app->add_option("--gamma-a", f.gamma_a, "pump rate gamma_a");
    app->add_option("--kappa1", f.kappa1, "cavity damping of mode 1");
    app->add_option("--kappa2", f.kappa2, "cavity damping of mode 2");
    app->add_option("--g1", f.g1, "coupling of mode 1");
    app->add_option("--g2", f.g2, "coupling of mode 2");
    app->add_option("--alpha1", f.alpha1, "initial coherent amplitude of mode 1: re[,im]");
    app->add_option("--alpha2", f.alpha2, "initial coherent amplitude of mode 2: re[,im]");
    app->add_option("--t-max", f.t_max, "simulation horizon (units 1/g)");
    app->add_option("--dt", f.dt, "integration step");
    app->add_option("--stride", f.stride, "steps between samples");
    app->add_option("--method", f.method, "rk4 | exact");
    app->add_option("--axis", f.axes, "sweep axis NAME=v1,v2,... (repeatable)");
    app->add_option("--out", f.out, "output directory");
    app->add_option("--config", f.config, "key = value configuration file");
    app->add_option("--seed", f.seed, "oracle grid seed");
    app->add_option("--threads", f.threads, "sweep worker threads");
    app->add_flag("--trajectories", f.trajectories, "write per-point trajectory CSVs in sweeps");
    app->add_flag("--fault-flip-alpha", f.fault_flip_alpha, "test hook: corrupt the closed-form alphas")
        ->group("");
}

template <class T>
void assign(std::optional<T> src, T& dst) {
    if (src) dst = *src;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << content;
}

}  // namespace

std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{"Two-mode field entanglement in a driven V-type quantum beat laser"};
    app.name(args.empty() ? "qbeat" : args.front());
    app.require_subcommand(1);
    FlagValues f;
    RunConfig config;

    const std::pair<const char*, Mode> modes[] = {{"simulate", Mode::simulate},
                                                  {"sweep", Mode::sweep},
                                                  {"stability", Mode::stability},
                                                  {"verify", Mode::verify}};
    const char* help[] = {"integrate one parameter point", "run a Cartesian parameter sweep",
                          "spectrum of the moment generator", "run oracle and consistency checks"};
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < 4; ++i) {
        auto* sub = app.add_subcommand(modes[i].first, help[i]);
        add_common(sub, f);
        subs.push_back(sub);
    }

    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw ParseError("command line", e.what());
    }
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) config.mode = modes[i].second;

    if (f.config) {
        std::ifstream in(*f.config);
        if (!in) throw ParseError(*f.config, "cannot open configuration file");
        apply_config_file(config, in, *f.config);
    }

    auto& p = config.params;
    assign(f.gamma, p.gamma);
    assign(f.P, p.P);
    assign(f.omega_abs, p.omega_abs);
    assign(f.phi, p.phi);
    assign(f.delta, p.delta);
    assign(f.gamma_a, p.gamma_a);
    assign(f.kappa1, p.kappa1);
    assign(f.kappa2, p.kappa2);
    assign(f.g1, p.g1);
    assign(f.g2, p.g2);
    if (f.alpha1) config.alpha1 = parse_amplitude(*f.alpha1);
    if (f.alpha2) config.alpha2 = parse_amplitude(*f.alpha2);
    assign(f.t_max, config.run.t_max);
    assign(f.dt, config.run.dt);
    assign(f.stride, config.run.stride);
    if (f.method) config.run.method = parse_method(*f.method);
    if (!f.axes.empty()) {
        config.axes.clear();
        for (const auto& a : f.axes) config.axes.push_back(parse_axis(a));
    }
    if (f.out) {
        config.out_dir = *f.out;
        config.out_given = true;
    }
    assign(f.seed, config.seed);
    assign(f.threads, config.threads);
    config.write_trajectories = config.write_trajectories || f.trajectories;
    config.fault_flip_alpha = f.fault_flip_alpha;

    validate_config(config);
    return config;
}

int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::filesystem::create_directories(config.out_dir);
    const auto summary_path = config.out_dir / "summary.json";

    const DriftSystem sys = build_drift(config.params);
    const double max_re = spectral_summary(sys).max_real_part;
    Trajectory traj;
    try {
        traj = simulate(sys, coherent_initial_state(config.alpha1, config.alpha2), config.run);
    } catch (const NonFiniteState& e) {
        nlohmann::ordered_json j;
        j["params"] = io::params_json(config.params);
        j["error"] = "NonFiniteState";
        j["blowup_time"] = e.time();
        j["max_real_eigenvalue"] = max_re;
        j["method"] = std::string(method_name(config.run.method));
        j["grid"] = {{"t_max", config.run.t_max}, {"dt", config.run.dt}, {"stride", config.run.stride}};
        write_file(summary_path, j.dump(2) + "\n");
        err << "error: " << e.what() << '\n';
        return kNumericalBlowUp;
    }

    const double imag = annotate(traj);
    if (imag > kImaginaryReportThreshold)
        err << "warning: Duan variance imaginary residual " << io::format_number(imag) << '\n';
    const RunSummary summary = summarize(traj);

    std::ostringstream csv;
    io::write_trajectory_csv(csv, traj);
    write_file(config.out_dir / "trajectory.csv", csv.str());
    write_file(summary_path, io::summary_json(config.params, summary, max_re, config.run).dump(2) + "\n");

    out << "samples: " << traj.times.size() << '\n'
        << "v_min: " << io::format_number(summary.v_min) << " at t = " << io::format_number(summary.t_at_vmin)
        << '\n'
        << "entanglement windows: " << summary.windows.size() << '\n'
        << "n_max: " << io::format_number(summary.n_max) << " at t = " << io::format_number(summary.t_at_nmax)
        << '\n'
        << "max real eigenvalue: " << io::format_number(max_re) << '\n'
        << "wrote " << (config.out_dir / "trajectory.csv").string() << ", " << summary_path.string() << '\n';
    return kSuccess;
}

int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    SweepSpec spec;
    spec.base = config.params;
    spec.axes = config.axes;
    spec.alpha1 = config.alpha1;
    spec.alpha2 = config.alpha2;
    spec.run = config.run;
    spec.threads = config.threads;
    spec.keep_trajectories = config.write_trajectories;

    const auto rows = run_sweep(spec);
    std::filesystem::create_directories(config.out_dir);
    std::ostringstream csv;
    io::write_sweep_csv(csv, rows);
    write_file(config.out_dir / "sweep.csv", csv.str());

    if (config.write_trajectories) {
        const auto dir = config.out_dir / "trajectories";
        std::filesystem::create_directories(dir);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].trajectory) continue;
            std::ostringstream name, body;
            name << "point_" << std::setw(4) << std::setfill('0') << i << ".csv";
            io::write_trajectory_csv(body, *rows[i].trajectory);
            write_file(dir / name.str(), body.str());
        }
    }

    std::size_t failed = 0;
    for (const auto& r : rows) {
        if (r.status != RowStatus::ok) {
            ++failed;
            err << "row error (" << status_name(r.status) << "): " << r.error << '\n';
        }
    }
    out << "rows: " << rows.size() << " (" << failed << " failed)\n"
        << "wrote " << (config.out_dir / "sweep.csv").string() << '\n';
    return kSuccess;
}

int run_stability(const RunConfig& config, std::ostream& out, std::ostream&) {
    const DriftSystem sys = build_drift(config.params);
    const SpectralSummary s = spectral_summary(sys);
    auto j = io::spectral_json(s);
    j["params"] = io::params_json(config.params);
    std::filesystem::create_directories(config.out_dir);
    write_file(config.out_dir / "stability.json", j.dump(2) + "\n");

    out << "eigenvalues of the moment generator:\n";
    for (const auto& e : s.eigenvalues)
        out << "  " << io::format_number(e.real()) << (e.imag() < 0 ? " - " : " + ")
            << io::format_number(std::abs(e.imag())) << "i\n";
    out << "max real part: " << io::format_number(s.max_real_part)
        << (s.net_gain ? " (net gain)" : " (no net gain)") << '\n';
    return kSuccess;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream&) {
    VerifyOptions opts;
    opts.seed = config.seed;
    opts.flip_alpha_sign = config.fault_flip_alpha;
    const VerifyReport report = run_verification(opts);

    std::ostringstream text;
    io::write_verify_report(text, report);
    out << text.str();
    if (config.out_given) {
        std::filesystem::create_directories(config.out_dir);
        write_file(config.out_dir / "verify.txt", text.str());
    }
    return report.passed() ? kSuccess : kVerificationFailed;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const auto config = parse_config(args, out);
        if (!config) return kSuccess;
        switch (config->mode) {
            case Mode::simulate: return run_simulate(*config, out, err);
            case Mode::sweep: return run_sweep(*config, out, err);
            case Mode::stability: return run_stability(*config, out, err);
            case Mode::verify: return run_verify(*config, out, err);
        }
    } catch (const ParseError& e) {
        err << "ParseError: " << e.what() << '\n';
        return kInvalidParameters;
    } catch (const OutOfRangeP& e) {
        err << "OutOfRangeP: " << e.what() << '\n';
        return kInvalidParameters;
    } catch (const InvalidParameter& e) {
        err << "InvalidParameter: " << e.what() << '\n';
        return kInvalidParameters;
    } catch (const DegenerateParameters& e) {
        err << "DegenerateParameters: " << e.what() << '\n';
        return kInvalidParameters;
    } catch (const NonFiniteState& e) {
        err << "NonFiniteState: " << e.what() << '\n';
        return kNumericalBlowUp;
    }
    return kSuccess;
}

}  // namespace qbeat::cli
