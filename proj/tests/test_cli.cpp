#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "meanper/cli.hpp"
#include "meanper/error.hpp"
#include "oracles.hpp"

using namespace meanper;
using namespace meanper::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("meanper_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string parse_error(std::string_view text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        return e.what();
    }
    FAIL("expected a parse error");
    return {};
}

const char* kSine = R"(# sin(pi t) on [-2, 2]
[convolver]
kind = gegenbauer
alpha = 0.5
r = 1

[function]
variant = exponential_sum
terms = 3.141592653589793 0 0 0 -0.5; -3.141592653589793 0 0 0 0.5
half_width = 2

[run]
command = extend
R = 5
cutoff = 32
)";

}  // namespace

TEST_CASE("minimal config receives the documented defaults") {
    const RunConfig cfg = parse_config("[convolver]\nkind = gegenbauer\nalpha = 1.5\nr = 2\n");
    CHECK(cfg.convolver.alpha == 1.5);
    CHECK(cfg.convolver.r == 2.0);
    CHECK(cfg.run.quad_order == 256);
    CHECK(cfg.run.cutoff == 64);
    CHECK(cfg.run.grid_size == 801);
    CHECK(cfg.function.variant == "none");
}

TEST_CASE("parse errors name the line and key") {
    CHECK(parse_error("[convolver]\nalpha = -0.6\n").find("alpha > -1/2") != std::string::npos);
    const std::string unknown = parse_error("[convolver]\nkind = gegenbauer\nalpha_ = 1\n");
    CHECK(unknown.find("line 3") != std::string::npos);
    CHECK(unknown.find("alpha_") != std::string::npos);
    CHECK(parse_error("[run]\ncutoff = ten\n").find("line 2: key 'cutoff'") != std::string::npos);
    CHECK(parse_error("[run]\ncutoff = 0\n").find("cutoff") != std::string::npos);
    CHECK(parse_error("[solver]\n").find("unknown section") != std::string::npos);
    CHECK(parse_error("alpha = 1\n").find("line 1") != std::string::npos);
    CHECK(parse_error("[run]\nq = 1\nq = 2\n").find("duplicate") != std::string::npos);
    CHECK(parse_error("[convolver]\nkind = tent\nh_coeffs = 1 1\n").find("h_coeffs") != std::string::npos);
    CHECK(parse_error("[function]\nvariant = exponential_sum\nhalf_width = 2\n").find("terms") != std::string::npos);
    CHECK(parse_error("[function]\nterms = 1 0 0 1\n").find("re im m re_c im_c") != std::string::npos);
}

TEST_CASE("terms, comments and overrides") {
    RunConfig cfg = parse_config(kSine);
    REQUIRE(cfg.function.terms.size() == 2);
    CHECK(cfg.function.terms[1].c == cplx(0.0, 0.5));
    CHECK(cfg.run.R == 5.0);
    set_key(cfg, "run", "cutoff", "12");
    CHECK(cfg.run.cutoff == 12);
    CHECK_THROWS_AS(set_key(cfg, "run", "nope", "1"), Error);
}

TEST_CASE("MEANPER_OUT overrides out_dir") {
    RunConfig cfg = parse_config("[run]\nout_dir = from_config\n");
    ::setenv("MEANPER_OUT", "from_env", 1);
    apply_environment(cfg);
    ::unsetenv("MEANPER_OUT");
    CHECK(cfg.run.out_dir == "from_env");
}

TEST_CASE("bounds table follows the budget arithmetic") {
    const fs::path dir = scratch("bounds");
    RunConfig cfg = parse_config("[convolver]\nalpha = 0.5\n[run]\ncommand = bounds\nk_max = 6\n");
    cfg.run.out_dir = dir.string();
    std::ostringstream log, err;
    CHECK(run_command(cfg, log, err) == 0);
    CHECK(slurp(dir / "bounds.csv") == "# k,smoothness_q,theorem_q\n1,,\n2,,\n3,0,\n4,1,0\n5,2,1\n6,3,2\n");
}

TEST_CASE("spectrum and coeffs commands write their CSVs") {
    const fs::path dir = scratch("coeffs");
    RunConfig cfg = parse_config(kSine);
    cfg.run.out_dir = dir.string();
    cfg.run.command = "coeffs";
    cfg.run.cutoff = 4;
    std::ostringstream log, err;
    CHECK(run_command(cfg, log, err) == 0);
    const std::string coeffs = slurp(dir / "coeffs.csv");
    CHECK(coeffs.rfind("# index,re_lambda,im_lambda,eta,re_c,im_c,probe_spread\n", 0) == 0);
    CHECK(std::count(coeffs.begin(), coeffs.end(), '\n') == 9);
    cfg.run.command = "spectrum";
    CHECK(run_command(cfg, log, err) == 0);
    CHECK(slurp(dir / "spectrum.csv").rfind("# index,", 0) == 0);
}

TEST_CASE("extend writes the report and exits 0 when every gate holds") {
    const fs::path dir = scratch("extend");
    RunConfig cfg = parse_config(kSine);
    cfg.run.out_dir = dir.string();
    std::ostringstream log, err;
    CHECK(run_command(cfg, log, err) == 0);
    for (const char* name : {"extension.csv", "functional.csv", "report.json", "coeffs.csv", "spectrum.csv"}) {
        CHECK(fs::exists(dir / name));
    }
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"lemma_pass\": true") != std::string::npos);
    CHECK(report.find("\"residual_sup\"") != std::string::npos);
    CHECK(slurp(dir / "extension.csv").rfind("# t,re_f,im_f\n-5,", 0) == 0);
}

TEST_CASE("extend exits 2 when an advisory gate fails") {
    const fs::path dir = scratch("gate");
    RunConfig cfg = parse_config(kSine);
    cfg.run.out_dir = dir.string();
    cfg.run.k = 3;
    cfg.run.q = 2;
    std::ostringstream log, err;
    CHECK(run_command(cfg, log, err) == 2);
    CHECK(err.str().find("smoothness budget") != std::string::npos);
}

TEST_CASE("extend rejects f(t) = t with exit 1") {
    const fs::path dir = scratch("line");
    RunConfig cfg = parse_config(kSine);
    set_key(cfg, "function", "terms", "0 0 1 0 -1");
    cfg.run.out_dir = dir.string();
    std::ostringstream log, err;
    CHECK(run_command(cfg, log, err) == 1);
    CHECK(err.str().find("f not mean-periodic for T") != std::string::npos);
}

TEST_CASE("sampled functions are read from CSV relative to the config") {
    const fs::path dir = scratch("sampled");
    {
        std::ofstream samples(dir / "f.csv");
        samples.precision(17);
        samples << "# t,value\n";
        for (int i = 0; i <= 1000; ++i) {
            const double t = i == 1000 ? 2.0 : -2.0 + 0.004 * i;
            samples << t << "," << std::sin(oracle::pi * t) << "\n";
        }
        std::ofstream config(dir / "run.ini");
        config << "[convolver]\nalpha = 0.5\n[function]\nvariant = sampled\nsample_file = f.csv\nsmoothness_k = 6\n"
               << "[run]\ncommand = extend\nR = 4\ncutoff = 16\nout_dir = " << (dir / "out").string() << "\n";
    }
    const RunConfig cfg = load_config((dir / "run.ini").string());
    const FunctionSpec f = make_function(cfg);
    CHECK(f.is_sampled());
    CHECK(f.half_width() == 2.0);
    std::ostringstream log, err;
    const int code = run_command(cfg, log, err);
    CHECK((code == 0 || code == 2));
    CHECK(slurp(dir / "out" / "report.json").find("\"k\": 6") != std::string::npos);
}

TEST_CASE("verify suites pass") {
    for (const char* suite : {"bessel", "tent", "weighted"}) {
        const fs::path dir = scratch(std::string("verify_") + suite);
        RunConfig cfg = parse_config("[convolver]\nalpha = 0.5\n[run]\ncommand = verify\n");
        cfg.run.suite = suite;
        cfg.run.out_dir = dir.string();
        std::ostringstream log, err;
        const int code = run_command(cfg, log, err);
        INFO(log.str(), err.str());
        CHECK(code == 0);
        CHECK(slurp(dir / "verify.csv").rfind("# check,value,tolerance,pass\n", 0) == 0);
    }
}

TEST_CASE("outputs are byte-identical across thread counts") {
    std::string first;
    for (unsigned threads : {1u, 2u, 5u}) {
        const fs::path dir = scratch("threads_" + std::to_string(threads));
        RunConfig cfg = parse_config(kSine);
        cfg.run.out_dir = dir.string();
        cfg.run.threads = threads;
        std::ostringstream log, err;
        REQUIRE(run_command(cfg, log, err) == 0);
        const std::string all = slurp(dir / "extension.csv") + slurp(dir / "functional.csv") + slurp(dir / "coeffs.csv") +
                                slurp(dir / "spectrum.csv");
        if (first.empty()) first = all;
        CHECK(all == first);
    }
}
