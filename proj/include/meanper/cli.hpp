#pragma once

// Batch front end: `key = value` configuration and command dispatch.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "meanper/coeff.hpp"
#include "meanper/convolver.hpp"

namespace meanper::cli {

struct ConvolverBlock {
    std::string kind = "gegenbauer";   // gegenbauer | weighted | tent
    double alpha = 0.5;
    double r = 1.0;
    std::vector<double> h_coeffs;      // weighted only, ascending in t^2
};

struct FunctionBlock {
    std::string variant = "none";      // none | exponential_sum | sampled
    std::vector<ExponentialTerm> terms;
    std::string sample_file;
    std::optional<double> half_width;
    std::optional<int> smoothness_k;
};

struct RunBlock {
    std::string command;               // spectrum | coeffs | extend | verify | bounds
    std::string suite = "bessel";      // verify: bessel | tent | weighted
    std::optional<double> R;
    int q = 0;
    std::optional<int> k;
    std::optional<double> gamma;
    std::size_t cutoff = 64;
    std::size_t grid_size = 801;
    std::size_t quad_order = kDefaultQuadOrder;
    std::string out_dir = ".";
    unsigned threads = 0;              // 0: hardware concurrency
    double lemma_n = 0.0;
    int k_max = 10;
    bool deterministic = true;
};

struct RunConfig {
    ConvolverBlock convolver;
    FunctionBlock function;
    RunBlock run;
    std::string base_dir;              // resolves relative sample_file paths
};

/// Strict parse; unknown keys, bad values and violated constraints throw a
/// parse error naming the line and key.
RunConfig parse_config(std::string_view text, std::string base_dir = {});
RunConfig load_config(const std::string& path);

/// Sets one key as if it appeared in `section`; used for command-line overrides.
void set_key(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value);

/// MEANPER_OUT, when set, replaces run.out_dir.
void apply_environment(RunConfig& cfg);

Convolver make_convolver(const ConvolverBlock& block);
FunctionSpec make_function(const RunConfig& cfg);

/// Runs cfg.run.command. Returns 0 on success, 2 when an advisory gate
/// failed, 1 on error (reported on `err`).
int run_command(const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace meanper::cli
