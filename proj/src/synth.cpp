#include "meanper/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "meanper/csv.hpp"
#include "meanper/error.hpp"
#include "meanper/parallel.hpp"
#include "meanper/simd/kernels.hpp"

namespace meanper {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr std::size_t kSynthesisBlock = 256;
constexpr std::size_t kResidualPanels = 64;

cplx i_power(int m) {
    static constexpr cplx table[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    return table[m % 4];
}

double binomial(int n, int k) {
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
    return b;
}

std::optional<int> largest_below(double x) {
    if (!(x > 0.0)) return std::nullopt;
    return static_cast<int>(std::ceil(x)) - 1;
}

FunctionalSeries finish(FunctionalSeries series) {
    series.summary = summarize_tail(series.terms);
    return series;
}

}  // namespace

cplx e_monomial(cplx z, int m, double t) {
    return std::pow(kI * t, m) * std::exp(kI * z * t);
}

double b_weight(double R, const SpectralPoint& sp, int q) {
    if (R > 1.0) return std::pow(R, sp.m);
    if (R == 1.0) return sp.m + 1.0;
    return std::min(q + 1, sp.m + 1);
}

GateResult lemma_gate(const Spectrum& S, double N, double R, double r) {
    require(R > r, ErrorKind::InvalidArgument, "lemma_gate: R must exceed r");
    require(N >= 0.0, ErrorKind::InvalidArgument, "lemma_gate: N must be nonnegative");
    GateResult gate;
    gate.bound = 1.0 / (R - r);
    bool any = false;
    for (const SpectralPoint& sp : S.points) {
        const double mod = std::abs(sp.lambda);
        if (!(mod > N)) continue;
        any = true;
        gate.sup_value = std::max(gate.sup_value, (std::abs(sp.lambda.imag()) + sp.m) / std::log(2.0 + mod));
    }
    if (!any) gate.warnings.push_back("lemma_gate: no spectral point beyond N; sup taken as 0");
    gate.pass = gate.sup_value < gate.bound;
    return gate;
}

FunctionalSeries convergence_functional(const CoefficientTable& table, const Spectrum& S, double R, int q,
                                        bool use_sigma) {
    FunctionalSeries series;
    for (const SpectralPoint& sp : S.points) {
        if (table.find(sp.index, 0) == nullptr) continue;
        const double mod = std::abs(sp.lambda);
        double term = table.max_abs(sp.index) * b_weight(R, sp, q) * std::pow(mod + 1.0, q) *
                      std::exp(R * std::abs(sp.lambda.imag()));
        if (use_sigma) term *= sp.sigma ? *sp.sigma : sigma(sp);
        series.index.push_back(sp.index);
        series.abs_lambda.push_back(mod);
        series.terms.push_back(term);
    }
    return finish(std::move(series));
}

FunctionalSeries theorem_functional(const Spectrum& S, double r, int q, int k, double gamma) {
    FunctionalSeries series;
    const double exponent = gamma - k + q + 1;
    for (const SpectralPoint& sp : S.points) {
        const double mod = std::abs(sp.lambda);
        const double s = sp.sigma ? *sp.sigma : sigma(sp);
        series.index.push_back(sp.index);
        series.abs_lambda.push_back(mod);
        series.terms.push_back(s * b_weight(r, sp, q + 1) * std::pow(mod + 1.0, exponent));
    }
    return finish(std::move(series));
}

std::optional<int> smoothness_budget(int k, double alpha) {
    require(k >= 0, ErrorKind::InvalidArgument, "smoothness_budget: k must be nonnegative");
    return largest_below(k - (alpha + 1.5));
}

std::optional<int> theorem_budget(int k, double gamma) {
    require(k >= 0, ErrorKind::InvalidArgument, "theorem_budget: k must be nonnegative");
    require(gamma > 0.0, ErrorKind::InvalidArgument, "theorem_budget: gamma must be positive");
    return largest_below(k - 2.0 - gamma);
}

std::vector<double> uniform_grid(double R, std::size_t grid_size) {
    require(grid_size >= 2, ErrorKind::InvalidArgument, "uniform_grid: grid_size must be at least 2");
    require(R > 0.0, ErrorKind::InvalidArgument, "uniform_grid: R must be positive");
    std::vector<double> grid(grid_size);
    const double step = 2.0 * R / static_cast<double>(grid_size - 1);
    for (std::size_t i = 0; i < grid_size; ++i) grid[i] = -R + step * static_cast<double>(i);
    grid.back() = R;
    return grid;
}

std::vector<cplx> synthesize(const CoefficientTable& table, const Spectrum& S, double R, std::size_t grid_size,
                             int d) {
    require(d >= 0 && d <= kMaxSynthesisDerivative, ErrorKind::InvalidArgument,
            "synthesize: derivative order must lie in [0, 6]");
    const std::vector<double> grid = uniform_grid(R, grid_size);

    // d/dt^d [c (it)^eta e^{i lambda t}] by the product rule, entries already in spectral order.
    std::vector<simd::SeriesTerm> terms;
    for (const CoefficientEntry& e : table.entries) {
        require(e.index < S.points.size(), ErrorKind::InvalidArgument, "synthesize: table index outside spectrum");
        double falling = 1.0;
        for (int j = 0; j <= std::min(d, e.eta); ++j) {
            if (j > 0) falling *= e.eta - j + 1;
            const cplx coef = e.c * binomial(d, j) * falling * i_power(e.eta) * std::pow(kI * e.lambda, d - j);
            terms.push_back({e.lambda, coef, e.eta - j});
        }
    }

    std::vector<cplx> samples(grid_size, cplx(0.0));
    if (terms.empty()) return samples;
    const std::size_t blocks = (grid_size + kSynthesisBlock - 1) / kSynthesisBlock;
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t lo = b * kSynthesisBlock;
        const std::size_t len = std::min(kSynthesisBlock, grid_size - lo);
        simd::exp_series(std::span(grid).subspan(lo, len), terms, std::span(samples).subspan(lo, len));
    });
    return samples;
}

double residual(std::span<const cplx> samples, double R, const Convolver& T, std::span<const double> probes) {
    const double r = T.radius();
    const double reach = R - r;
    require(reach > 0.0, ErrorKind::InvalidArgument, "residual: R must exceed r");
    for (double t : probes) {
        if (!(std::abs(t) < reach)) {
            std::ostringstream msg;
            msg << "residual: probe " << t << " outside (" << -reach << ", " << reach << ")";
            throw Error(ErrorKind::InvalidArgument, msg.str());
        }
    }
    const std::vector<double> grid = uniform_grid(R, samples.size());
    std::vector<double> values(probes.size());
    parallel_for(probes.size(), [&](std::size_t p) {
        const double t = probes[p];
        const cplx conv = integrate_against(
            T, [&](double s) { return interpolate_cubic(grid, samples, std::clamp(t - s, -R, R)); }, kResidualPanels);
        values[p] = std::abs(conv);
    });
    double sup = 0.0;
    for (double v : values) sup = std::max(sup, v);
    return sup;
}

std::vector<double> residual_probes(double R, double r, std::size_t count) {
    const double reach = R - r;
    require(reach > 0.0, ErrorKind::InvalidArgument, "residual_probes: R must exceed r");
    require(count >= 1, ErrorKind::InvalidArgument, "residual_probes: count must be positive");
    std::vector<double> probes(count);
    for (std::size_t j = 0; j < count; ++j) {
        probes[j] = reach * (2.0 * static_cast<double>(j + 1) / static_cast<double>(count + 1) - 1.0);
    }
    return probes;
}

bool ExtensionReport::gate_warning() const {
    if (!lemma_pass || verdict != Verdict::Converging) return true;
    if (k && (!budget_q || q > *budget_q)) return true;
    if (theorem_tail && theorem_tail->verdict != Verdict::Converging) return true;
    return false;
}

ExtensionReport extend(const FunctionSpec& f, const Convolver& T, const ExtensionRequest& req) {
    const double r = T.radius();
    require(f.half_width() > r, ErrorKind::InvalidArgument,
            "extend: f must be given on an interval wider than supp T");
    require(req.R > f.half_width(), ErrorKind::InvalidArgument, "extend: R must exceed the half-width of f");
    require(req.q >= 0, ErrorKind::InvalidArgument, "extend: q must be nonnegative");
    require(req.cutoff >= 1, ErrorKind::InvalidArgument, "extend: cutoff must be positive");

    ExtensionReport report;
    report.R = req.R;
    report.q = req.q;
    report.k = req.k ? req.k : f.smoothness_k();
    report.gamma = req.gamma ? *req.gamma : (T.kind() == ConvolverKind::Tent ? 2.0 : T.alpha() + 0.5);

    SpectrumOptions options;
    options.quad_order = req.quad_order;
    Spectrum S = build_spectrum(T, req.cutoff, options);
    fill_sigma(S);
    report.spectrum_size = S.points.size();
    report.warnings = S.warnings;

    const auto probes = default_probes(f, T);
    const CoefficientTable table = extract_coefficients(f, T, S, probes);

    const GateResult gate = lemma_gate(S, req.lemma_n, req.R, r);
    report.lemma_sup = gate.sup_value;
    report.lemma_bound = gate.bound;
    report.lemma_pass = gate.pass;
    report.warnings.insert(report.warnings.end(), gate.warnings.begin(), gate.warnings.end());
    if (!gate.pass) report.warnings.push_back("lemma gate failed: sup exceeds 1/(R - r)");

    report.functional = convergence_functional(table, S, req.R, req.q, false);
    report.tail_ratio = report.functional.summary.tail_ratio;
    report.verdict = report.functional.summary.verdict;
    if (report.verdict != Verdict::Converging) {
        report.warnings.push_back(std::string("convergence functional ") + std::string(verdict_name(report.verdict)));
    }

    if (report.k) {
        if (T.kind() != ConvolverKind::Tent) report.budget_q = smoothness_budget(*report.k, T.alpha());
        report.theorem_q = theorem_budget(*report.k, report.gamma);
        report.theorem_tail = theorem_functional(S, r, req.q, *report.k, report.gamma).summary;
        if (!report.budget_q || req.q > *report.budget_q) {
            report.warnings.push_back("requested q exceeds the smoothness budget");
        }
    }

    report.coefficients = table.entries;
    report.spectrum = std::make_shared<const Spectrum>(std::move(S));

    report.grid = uniform_grid(req.R, req.grid_size);
    report.samples = synthesize(table, *report.spectrum, req.R, req.grid_size, 0);
    report.residual_sup = residual(report.samples, req.R, T, residual_probes(req.R, r));

    const double b = f.half_width();
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        const double t = report.grid[i];
        if (std::abs(t) <= b) report.restriction_sup = std::max(report.restriction_sup, std::abs(report.samples[i] - f(t)));
    }
    return report;
}

void write_extension_csv(std::ostream& out, std::span<const double> grid, std::span<const cplx> samples) {
    csv::Writer w(out, {"t", "re_f", "im_f"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        w << grid[i] << samples[i].real() << samples[i].imag();
        w.row();
    }
}

void write_functional_csv(std::ostream& out, const FunctionalSeries& series) {
    csv::Writer w(out, {"index", "abs_lambda", "term", "partial_sum"});
    for (std::size_t i = 0; i < series.terms.size(); ++i) {
        w << series.index[i] << series.abs_lambda[i] << series.terms[i] << series.summary.partial_sums[i];
        w.row();
    }
}

}  // namespace meanper
