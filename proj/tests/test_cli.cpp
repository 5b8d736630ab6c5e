#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbeat/cli.hpp"
#include "qbeat/error.hpp"
#include "qbeat/io.hpp"

using namespace qbeat;
namespace fs = std::filesystem;

namespace {

std::optional<RunConfig> parse(std::vector<std::string> args) {
    args.insert(args.begin(), "qbeat");
    std::ostringstream out;
    return cli::parse_config(args, out);
}

int run(std::vector<std::string> args, std::string* captured_err = nullptr) {
    args.insert(args.begin(), "qbeat");
    std::ostringstream out, err;
    const int code = cli::main(args, out, err);
    if (captured_err) *captured_err = err.str();
    return code;
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("qbeat_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("parse_config defaults") {
    const auto c = parse({"simulate"});
    REQUIRE(c);
    CHECK(c->mode == Mode::simulate);
    CHECK(c->params == ModelParams{});
    CHECK(c->params.gamma == 1.0);
    CHECK(c->params.P == 0.5);
    CHECK(c->params.omega_abs == 10.0);
    CHECK(c->params.kappa1 == 0.001);
    CHECK(c->alpha1 == cplx(10.0));
    CHECK(c->alpha2 == cplx(-10.0));
    CHECK(c->run.t_max == 10.0);
    CHECK(c->run.dt == 1e-3);
    CHECK(c->run.stride == 10);
    CHECK(c->run.method == Method::rk4);
}

TEST_CASE("parse_config flags override the file") {
    const auto dir = scratch("cfg");
    {
        std::ofstream f(dir / "run.cfg");
        f << "# reference point\nP = 0.5\ngamma_a = 4\nomega-abs = 7  # drive\nalpha1 = 3,4\naxis = delta=1,5\n";
    }
    const auto c = parse({"sweep", "--config", (dir / "run.cfg").string(), "--P", "0.9", "--method", "exact"});
    REQUIRE(c);
    CHECK(c->mode == Mode::sweep);
    CHECK(c->params.P == 0.9);
    CHECK(c->params.gamma_a == 4.0);
    CHECK(c->params.omega_abs == 7.0);
    CHECK(c->alpha1 == cplx(3.0, 4.0));
    CHECK(c->run.method == Method::exact);
    REQUIRE(c->axes.size() == 1);
    CHECK(c->axes[0].name == "delta");
    CHECK(c->axes[0].values == std::vector<double>{1.0, 5.0});
}

TEST_CASE("parse_config errors") {
    const auto dir = scratch("cfgerr");
    {
        std::ofstream f(dir / "bad.cfg");
        f << "P = 1.5\n";
    }
    CHECK_THROWS_AS(parse({"simulate", "--config", (dir / "bad.cfg").string()}), InvalidParameter);
    {
        std::ofstream f(dir / "typo.cfg");
        f << "gamma = 1\n\nkapa1 = 0.1\n";
    }
    try {
        parse({"simulate", "--config", (dir / "typo.cfg").string()});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("typo.cfg:3") != std::string::npos);
        CHECK(std::string(e.what()).find("kapa1") != std::string::npos);
    }
    {
        std::ofstream f(dir / "nan.cfg");
        f << "gamma = fast\n";
    }
    CHECK_THROWS_AS(parse({"simulate", "--config", (dir / "nan.cfg").string()}), ParseError);
    CHECK_THROWS_AS(parse({"simulate", "--gamma"}), ParseError);
    CHECK_THROWS_AS(parse({"launch"}), ParseError);
    CHECK_THROWS_AS(parse({"sweep", "--axis", "gamma"}), ParseError);
    CHECK_THROWS_AS(parse({"simulate", "--dt", "0"}), InvalidParameter);
    CHECK_FALSE(parse({"--help"}));
}

TEST_CASE("simulate writes trajectory and summary") {
    const auto dir = scratch("sim");
    REQUIRE(run({"simulate", "--out", dir.string()}) == cli::kSuccess);

    std::ifstream csv(dir / "trajectory.csv");
    std::string header, first;
    std::getline(csv, header);
    std::getline(csv, first);
    CHECK(header == io::trajectory_header());
    CHECK(header.rfind("t,V,N,m1_re,m1_im,m2_re", 0) == 0);
    CHECK(first.rfind("0,2,200,", 0) == 0);

    const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
    for (const char* key : {"params", "v_min", "t_at_vmin", "windows", "n_max", "t_at_nmax",
                            "max_real_eigenvalue", "method", "grid"})
        CHECK(j.contains(key));
    CHECK(j["grid"]["stride"] == 10);
    CHECK(j["method"] == "rk4");
}

TEST_CASE("exit codes") {
    const auto dir = scratch("codes");
    std::string err;
    CHECK(run({"simulate", "--omega-abs", "0", "--P", "1", "--out", dir.string()}, &err) == cli::kInvalidParameters);
    CHECK(err.find("DegenerateParameters") != std::string::npos);
    CHECK(run({"simulate", "--P", "1.2", "--out", dir.string()}) == cli::kInvalidParameters);

    CHECK(run({"simulate", "--delta", "10", "--t-max", "1000", "--dt", "0.01", "--out", dir.string()}) ==
          cli::kNumericalBlowUp);
    const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(j["error"] == "NonFiniteState");
    CHECK(j["blowup_time"].get<double>() > 0.0);

    CHECK(run({"verify"}) == cli::kSuccess);
    CHECK(run({"verify", "--seed", "7"}) == cli::kSuccess);
    CHECK(run({"verify", "--fault-flip-alpha"}, &err) == cli::kVerificationFailed);
    CHECK(run({"stability", "--out", dir.string()}) == cli::kSuccess);
    CHECK(nlohmann::json::parse(slurp(dir / "stability.json"))["eigenvalues"].size() == 14);
}

TEST_CASE("sweep writes one row per point and optional trajectories") {
    const auto dir = scratch("sweep");
    REQUIRE(run({"sweep", "--axis", "gamma=0.5,1,1.5", "--t-max", "1", "--trajectories", "--out", dir.string()}) ==
            cli::kSuccess);
    std::ifstream csv(dir / "sweep.csv");
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) ++lines;
    CHECK(lines == 4);
    CHECK(fs::exists(dir / "trajectories" / "point_0002.csv"));
}

TEST_CASE("numeric cells round-trip") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t bits = rng();
        double x;
        std::memcpy(&x, &bits, sizeof x);
        if (!std::isfinite(x)) continue;
        CHECK(io::parse_number(io::format_number(x)) == x);
    }
    CHECK(io::format_number(0.1) == "0.10000000000000001");
    CHECK(io::format_number(200.0) == "200");
}
