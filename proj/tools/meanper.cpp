// meanper: batch driver for spectrum, coefficient, extension and budget runs.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "meanper/cli.hpp"
#include "meanper/simd/kernels.hpp"

namespace {

struct Override {
    const char* section;
    const char* key;
    const char* help;
};

constexpr Override kOverrides[] = {
    {"convolver", "kind", "convolver kind: gegenbauer | weighted | tent"},
    {"convolver", "alpha", "Gegenbauer exponent alpha > -1/2"},
    {"convolver", "r", "support radius"},
    {"convolver", "h_coeffs", "even polynomial h, ascending coefficients of t^0, t^2, ..."},
    {"function", "variant", "none | exponential_sum | sampled"},
    {"function", "terms", "'re im m re_c im_c; ...'"},
    {"function", "sample_file", "CSV with t,value or t,re,im rows"},
    {"function", "half_width", "half-width of the interval carrying f"},
    {"function", "smoothness_k", "declared smoothness of f"},
    {"run", "suite", "verify suite: bessel | tent | weighted"},
    {"run", "R", "target half-width"},
    {"run", "q", "requested derivative order"},
    {"run", "k", "smoothness order for the budgets"},
    {"run", "gamma", "theorem exponent gamma"},
    {"run", "cutoff", "number of positive spectral points"},
    {"run", "grid_size", "samples over [-R, R]"},
    {"run", "quad_order", "base Gauss-Legendre order"},
    {"run", "out_dir", "output directory"},
    {"run", "threads", "worker threads, 0 = all cores"},
    {"run", "lemma_n", "lower |lambda| bound for the lemma gate"},
    {"run", "k_max", "largest k in the bounds table"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extend solutions of convolution equations by spectral synthesis"};
    app.set_version_flag("--version", "meanper 1.0.0");

    std::string command;
    std::string config_path;
    std::string isa = "auto";
    app.add_option("command", command, "spectrum | coeffs | extend | verify | bounds")
        ->check(CLI::IsMember({"spectrum", "coeffs", "extend", "verify", "bounds"}));
    app.add_option("-c,--config", config_path, "configuration file")->check(CLI::ExistingFile);
    app.add_option("--isa", isa, "kernel variant: auto | scalar | avx2")->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    std::map<std::string, std::string> values;
    for (const Override& o : kOverrides) {
        app.add_option(std::string("--") + o.key, values[std::string(o.section) + "." + o.key], o.help);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        meanper::cli::RunConfig cfg = config_path.empty() ? meanper::cli::parse_config("") : meanper::cli::load_config(config_path);
        meanper::cli::apply_environment(cfg);
        for (const Override& o : kOverrides) {
            if (app.count(std::string("--") + o.key) > 0) {
                meanper::cli::set_key(cfg, o.section, o.key, values[std::string(o.section) + "." + o.key]);
            }
        }
        if (!command.empty()) meanper::cli::set_key(cfg, "run", "command", command);
        if (isa == "scalar") meanper::simd::set_isa(meanper::simd::Isa::Scalar);
        if (isa == "avx2") meanper::simd::set_isa(meanper::simd::Isa::Avx2);
        return meanper::cli::run_command(cfg, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
