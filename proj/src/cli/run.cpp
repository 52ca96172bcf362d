#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "cli/verify.hpp"
#include "meanper/cli.hpp"
#include "meanper/csv.hpp"
#include "meanper/error.hpp"
#include "meanper/parallel.hpp"
#include "meanper/spectrum.hpp"
#include "meanper/synth.hpp"

namespace meanper::cli {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::InvalidArgument, "run: cannot write '" + (dir / name).string() + "'");
    return out;
}

double default_gamma(const Convolver& T) {
    return T.kind() == ConvolverKind::Tent ? 2.0 : T.alpha() + 0.5;
}

nlohmann::json optional_int(const std::optional<int>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

Spectrum spectrum_for(const RunConfig& cfg, const Convolver& T) {
    SpectrumOptions options;
    options.quad_order = cfg.run.quad_order;
    Spectrum S = build_spectrum(T, cfg.run.cutoff, options);
    fill_sigma(S);
    return S;
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << "warning: " << w << "\n";
}

int cmd_spectrum(const RunConfig& cfg, const fs::path& dir, std::ostream& log, std::ostream& err) {
    const Convolver T = make_convolver(cfg.convolver);
    const Spectrum S = spectrum_for(cfg, T);
    auto out = open_output(dir, "spectrum.csv");
    write_spectrum_csv(out, S);
    report_warnings(S.warnings, err);
    log << T.describe() << ": " << S.points.size() << " spectral points -> " << (dir / "spectrum.csv").string() << "\n";
    return 0;
}

int cmd_coeffs(const RunConfig& cfg, const fs::path& dir, std::ostream& log, std::ostream& err) {
    const Convolver T = make_convolver(cfg.convolver);
    const FunctionSpec f = make_function(cfg);
    const Spectrum S = spectrum_for(cfg, T);
    const CoefficientTable table = extract_coefficients(f, T, S, default_probes(f, T));
    auto spectrum_out = open_output(dir, "spectrum.csv");
    write_spectrum_csv(spectrum_out, S);
    auto out = open_output(dir, "coeffs.csv");
    write_coefficients_csv(out, table);
    report_warnings(S.warnings, err);
    log << table.entries.size() << " coefficients -> " << (dir / "coeffs.csv").string() << "\n";
    return 0;
}

int cmd_extend(const RunConfig& cfg, const fs::path& dir, std::ostream& log, std::ostream& err) {
    const Convolver T = make_convolver(cfg.convolver);
    const FunctionSpec f = make_function(cfg);
    require(cfg.run.R.has_value(), ErrorKind::InvalidArgument, "extend: run.R is required");

    ExtensionRequest req;
    req.R = *cfg.run.R;
    req.q = cfg.run.q;
    req.grid_size = cfg.run.grid_size;
    req.cutoff = cfg.run.cutoff;
    req.quad_order = cfg.run.quad_order;
    req.k = cfg.run.k ? cfg.run.k : cfg.function.smoothness_k;
    req.gamma = cfg.run.gamma;
    req.lemma_n = cfg.run.lemma_n;
    const ExtensionReport rep = extend(f, T, req);

    {
        auto out = open_output(dir, "spectrum.csv");
        write_spectrum_csv(out, *rep.spectrum);
    }
    {
        auto out = open_output(dir, "coeffs.csv");
        write_coefficients_csv(out, rep.coefficients);
    }
    {
        auto out = open_output(dir, "extension.csv");
        write_extension_csv(out, rep.grid, rep.samples);
    }
    {
        auto out = open_output(dir, "functional.csv");
        write_functional_csv(out, rep.functional);
    }

    nlohmann::ordered_json j;
    j["convolver"] = T.describe();
    j["R"] = rep.R;
    j["q"] = rep.q;
    j["k"] = optional_int(rep.k);
    j["gamma"] = rep.gamma;
    j["spectrum_size"] = rep.spectrum_size;
    j["lemma_sup"] = rep.lemma_sup;
    j["lemma_bound"] = rep.lemma_bound;
    j["lemma_pass"] = rep.lemma_pass;
    j["budget_q"] = optional_int(rep.budget_q);
    j["theorem_q"] = optional_int(rep.theorem_q);
    if (rep.theorem_tail) {
        j["theorem_tail_ratio"] = rep.theorem_tail->tail_ratio;
        j["theorem_verdict"] = verdict_name(rep.theorem_tail->verdict);
    }
    j["functional_partial_sums"] = rep.functional.summary.partial_sums;
    j["tail_ratio"] = rep.tail_ratio;
    j["verdict"] = verdict_name(rep.verdict);
    j["residual_sup"] = rep.residual_sup;
    j["restriction_sup"] = rep.restriction_sup;
    j["samples"] = "extension.csv";
    j["gate_warning"] = rep.gate_warning();
    j["warnings"] = rep.warnings;
    {
        auto out = open_output(dir, "report.json");
        out << j.dump(2) << "\n";
    }

    report_warnings(rep.warnings, err);
    log << "extended to [-" << rep.R << ", " << rep.R << "]: residual " << rep.residual_sup << ", lemma "
        << (rep.lemma_pass ? "pass" : "fail") << ", functional " << verdict_name(rep.verdict) << "\n";
    return rep.gate_warning() ? 2 : 0;
}

int cmd_verify(const RunConfig& cfg, const fs::path& dir, std::ostream& log, std::ostream&) {
    const auto checks = run_suite(cfg.run.suite, cfg);
    auto out = open_output(dir, "verify.csv");
    csv::Writer w(out, {"check", "value", "tolerance", "pass"});
    bool all = true;
    for (const Check& c : checks) {
        w << c.name << c.value << c.tolerance << (c.pass ? 1 : 0);
        w.row();
        log << (c.pass ? "PASS " : "FAIL ") << cfg.run.suite << "/" << c.name << " " << c.value << " (tol " << c.tolerance
            << ")\n";
        all = all && c.pass;
    }
    return all ? 0 : 1;
}

int cmd_bounds(const RunConfig& cfg, const fs::path& dir, std::ostream& log, std::ostream&) {
    const Convolver T = make_convolver(cfg.convolver);
    const double alpha = T.alpha();
    const double gamma = cfg.run.gamma.value_or(default_gamma(T));
    auto out = open_output(dir, "bounds.csv");
    csv::Writer w(out, {"k", "smoothness_q", "theorem_q"});
    auto cell = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
    log << "k  q<k-(alpha+3/2)  q<k-2-gamma   (alpha=" << alpha << ", gamma=" << gamma << ")\n";
    for (int k = 1; k <= cfg.run.k_max; ++k) {
        const auto sq = smoothness_budget(k, alpha);
        const auto tq = theorem_budget(k, gamma);
        w << k << cell(sq) << cell(tq);
        w.row();
        log << k << "  " << (sq ? cell(sq) : "none") << "  " << (tq ? cell(tq) : "none") << "\n";
    }
    return 0;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    try {
        set_thread_count(cfg.run.threads);
        const fs::path dir(cfg.run.out_dir);
        fs::create_directories(dir);
        const std::string& cmd = cfg.run.command;
        if (cmd == "spectrum") return cmd_spectrum(cfg, dir, log, err);
        if (cmd == "coeffs") return cmd_coeffs(cfg, dir, log, err);
        if (cmd == "extend") return cmd_extend(cfg, dir, log, err);
        if (cmd == "verify") return cmd_verify(cfg, dir, log, err);
        if (cmd == "bounds") return cmd_bounds(cfg, dir, log, err);
        throw Error(ErrorKind::InvalidArgument, cmd.empty() ? "run: no command given" : "run: unknown command '" + cmd + "'");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace meanper::cli
