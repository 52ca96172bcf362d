#pragma once

// Series synthesis over a spectrum and the extension pipeline built on it.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meanper/coeff.hpp"
#include "meanper/spectrum.hpp"
#include "meanper/tail.hpp"

namespace meanper {

inline constexpr int kMaxSynthesisDerivative = 6;

/// (it)^m e^{izt}
cplx e_monomial(cplx z, int m, double t);

/// R^m for R > 1, m + 1 for R = 1, min(q + 1, m + 1) for R < 1.
double b_weight(double R, const SpectralPoint& sp, int q);

struct GateResult {
    double sup_value = 0.0;
    double bound = 0.0;   // 1 / (R - r)
    bool pass = true;
    std::vector<std::string> warnings;
};

/// sup over |lambda| > N of (|Im lambda| + m) / ln(2 + |lambda|), against 1/(R - r).
GateResult lemma_gate(const Spectrum& S, double N, double R, double r);

struct FunctionalSeries {
    std::vector<std::size_t> index;
    std::vector<double> abs_lambda;
    std::vector<double> terms;
    TailSummary summary;   // partial_sums aligned with terms ({0} when empty)
};

/// Terms max_eta |c| * B(R, lambda, q) * (|lambda| + 1)^q * e^{R |Im lambda|},
/// times sigma when use_sigma, in spectral order.
FunctionalSeries convergence_functional(const CoefficientTable& table, const Spectrum& S, double R, int q,
                                        bool use_sigma);

/// Terms sigma * B(r, lambda, q + 1) * (|lambda| + 1)^(gamma - k + q + 1),
/// independent of f.
FunctionalSeries theorem_functional(const Spectrum& S, double r, int q, int k, double gamma);

/// Largest q >= 0 with q < k - (alpha + 3/2).
std::optional<int> smoothness_budget(int k, double alpha);
/// Largest q >= 0 with q < k - 2 - gamma.
std::optional<int> theorem_budget(int k, double gamma);

/// Uniform grid of `grid_size` points over [-R, R].
std::vector<double> uniform_grid(double R, std::size_t grid_size);

/// d-th derivative of sum c (it)^eta e^{i lambda t} on uniform_grid(R, grid_size).
std::vector<cplx> synthesize(const CoefficientTable& table, const Spectrum& S, double R, std::size_t grid_size,
                             int d = 0);

/// sup over probes of |int f_ext(t - s) T(s) ds|, f_ext interpolated from
/// samples on uniform_grid(R, samples.size()).
double residual(std::span<const cplx> samples, double R, const Convolver& T, std::span<const double> probes);

/// `count` points evenly spread inside (-(R - r), R - r).
std::vector<double> residual_probes(double R, double r, std::size_t count = 17);

struct ExtensionRequest {
    double R = 0.0;
    int q = 0;
    std::size_t grid_size = 801;
    std::size_t cutoff = 64;
    std::size_t quad_order = kDefaultQuadOrder;
    std::optional<int> k;          // falls back to the sampled function's smoothness
    std::optional<double> gamma;   // default: alpha + 1/2, or 2 for the tent
    double lemma_n = 0.0;
};

struct ExtensionReport {
    double R = 0.0;
    int q = 0;
    std::optional<int> k;
    double gamma = 0.0;
    double lemma_sup = 0.0;
    double lemma_bound = 0.0;
    bool lemma_pass = true;
    std::optional<int> budget_q;
    std::optional<int> theorem_q;
    std::optional<TailSummary> theorem_tail;
    FunctionalSeries functional;
    double tail_ratio = 0.0;
    Verdict verdict = Verdict::Converging;
    double residual_sup = 0.0;
    double restriction_sup = 0.0;   // |f_ext - f| on the original interval
    std::size_t spectrum_size = 0;
    std::shared_ptr<const Spectrum> spectrum;
    std::vector<CoefficientEntry> coefficients;
    std::vector<double> grid;
    std::vector<cplx> samples;
    std::vector<std::string> warnings;

    /// True when some advisory gate did not hold.
    bool gate_warning() const;
};

ExtensionReport extend(const FunctionSpec& f, const Convolver& T, const ExtensionRequest& req);

/// t, re_f, im_f
void write_extension_csv(std::ostream& out, std::span<const double> grid, std::span<const cplx> samples);
/// index, abs_lambda, term, partial_sum
void write_functional_csv(std::ostream& out, const FunctionalSeries& series);

}  // namespace meanper
