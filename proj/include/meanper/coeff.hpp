#pragma once

// Coefficient machinery: the recursive a_j sequences, sigma, the
// interpolating entire functions, biorthogonal kernels T_{lambda,0}, and
// extraction of c_{lambda,eta}(T, f) by kernel convolution at probe points.

#include <complex>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <variant>
#include <vector>

#include "meanper/convolver.hpp"
#include "meanper/spectrum.hpp"

namespace meanper {

/// c * (it)^m * e^{i lambda t}
struct ExponentialTerm {
    cplx lambda;
    int m = 0;
    cplx c;
};

/// Candidate solution f on [-half_width, half_width]: either an explicit
/// exponential sum or samples on a grid whose endpoints are +-half_width.
class FunctionSpec {
public:
    static FunctionSpec exponential_sum(std::vector<ExponentialTerm> terms, double half_width);
    static FunctionSpec sampled(std::vector<double> grid, std::vector<cplx> values, int smoothness_k);

    bool is_sampled() const { return std::holds_alternative<Samples>(data_); }
    double half_width() const { return half_width_; }
    std::optional<int> smoothness_k() const;

    const std::vector<ExponentialTerm>& terms() const;
    const std::vector<double>& grid() const;
    const std::vector<cplx>& values() const;

    /// Domain error outside [-half_width, half_width].
    cplx operator()(double t) const;
    void evaluate(std::span<const double> t, std::span<cplx> out) const;

    /// Rough angular frequency content, used to size quadrature panels.
    double bandwidth() const;

private:
    struct Terms {
        std::vector<ExponentialTerm> terms;
    };
    struct Samples {
        std::vector<double> grid;
        std::vector<cplx> values;
        int smoothness_k = 0;
    };

    FunctionSpec(std::variant<Terms, Samples> data, double half_width)
        : data_(std::move(data)), half_width_(half_width) {}

    std::variant<Terms, Samples> data_;
    double half_width_;
};

/// p(d/dt) f for an exponential sum, p given by ascending coefficients.
FunctionSpec apply_differential(const FunctionSpec& f, std::span<const cplx> poly);

/// Four-point local Lagrange interpolation on a sorted grid.
cplx interpolate_cubic(std::span<const double> grid, std::span<const cplx> values, double t);

struct BiorthogonalKernel {
    cplx lambda;
    std::vector<double> grid;
    std::vector<cplx> values;
    cplx a0;
};

struct CoefficientEntry {
    std::size_t index = 0;   // spectral index
    int eta = 0;
    cplx lambda;
    cplx c;
    double probe_spread = 0.0;
};

struct CoefficientTable {
    std::vector<CoefficientEntry> entries;   // sorted by (index, eta)
    std::shared_ptr<const FunctionSpec> source;
    Convolver convolver;

    const CoefficientEntry* find(std::size_t index, int eta) const;
    /// max over eta of |c_{lambda,eta}|, 0 when absent.
    double max_abs(std::size_t index) const;
};

/// a_0 .. a_{n-1} of the recursion at sp for the given eta.
std::vector<cplx> a_sequence(const SpectralPoint& sp, int eta);

/// sum_{j <= m} |a_j^{lambda,0}|
double sigma(const SpectralPoint& sp);
/// Stores sigma into every point of S.
void fill_sigma(Spectrum& S);

/// a^{lambda,eta}(T^, z); Taylor development around lambda when |z - lambda| < 0.25.
cplx interpolating_entire(const Convolver& T, const SpectralPoint& sp, int eta, cplx z);

/// T_{lambda,0} at arbitrary sorted points of [-r, r].
std::vector<cplx> kernel_values(const Convolver& T, const SpectralPoint& sp, std::span<const double> s);

/// T_{lambda,0} sampled on a uniform grid over [-r, r].
BiorthogonalKernel build_kernel(const Convolver& T, const SpectralPoint& sp, std::size_t grid_size);

/// {-(b - r)/2, 0, (b - r)/2} for f on [-b, b].
std::vector<double> default_probes(const FunctionSpec& f, const Convolver& T);

inline constexpr double kProbeSpreadTolerance = 1e-4;

CoefficientTable extract_coefficients(const FunctionSpec& f, const Convolver& T, const Spectrum& S,
                                      std::span<const double> probes);

struct DecayReport {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    std::size_t points_used = 0;
};

/// Least-squares slope of log(|c| |lambda|^k / sigma) against log|lambda|
/// over the upper half of the spectrum.
DecayReport decay_report(const CoefficientTable& table, const Spectrum& S, int k);

/// index, re_lambda, im_lambda, eta, re_c, im_c, probe_spread
void write_coefficients_csv(std::ostream& out, std::span<const CoefficientEntry> entries);
inline void write_coefficients_csv(std::ostream& out, const CoefficientTable& table) {
    write_coefficients_csv(out, table.entries);
}

}  // namespace meanper
