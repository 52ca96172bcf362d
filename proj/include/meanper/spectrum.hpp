#pragma once

// Zero set of T^ with multiplicities: asymptotic seeds, Newton refinement,
// argument-principle counting, and the zero-density diagnostic.

#include <complex>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "meanper/convolver.hpp"
#include "meanper/tail.hpp"

namespace meanper {

struct SpectralPoint {
    cplx lambda;
    int multiplicity = 1;
    int m = 0;                  // multiplicity - 1
    std::vector<cplx> derivs;   // T^(j)(lambda), j = 0 .. 2 * multiplicity
    std::optional<double> sigma;
    std::size_t index = 0;      // position in |lambda|-ascending order

    /// max(1, |T^(n)(lambda)|), the yardstick for residual checks.
    double scale() const;
};

struct Spectrum {
    std::vector<SpectralPoint> points;
    Convolver convolver;
    std::size_t count_requested = 0;
    std::vector<std::string> warnings;
};

struct SpectrumOptions {
    double tol = 1e-12;
    int max_iter = 60;
    int contour_nodes = 512;
    std::size_t quad_order = kDefaultQuadOrder;
};

/// Positive asymptotic seeds: Gegenbauer pi (m + (2 alpha - 1) / 4) / r,
/// Weighted pi (3/2 + alpha + 2n) / (2r), Tent 2 pi m / r.
std::vector<cplx> predict_zeros(const Convolver& T, std::size_t count);

/// Damped Newton on T^. Throws NoConvergenceError after max_iter.
cplx refine_zero(const Convolver& T, cplx seed, double tol = 1e-12, int max_iter = 60,
                 std::size_t order = kDefaultQuadOrder);

/// Zeros of T^ inside |z - lambda| < radius by the argument principle
/// (trapezoid rule on the circle).
int multiplicity(const Convolver& T, cplx lambda, double radius, int nodes = 512,
                 std::size_t order = kDefaultQuadOrder);

/// The first `count` zeros on the positive side and their mirrors.
Spectrum build_spectrum(const Convolver& T, std::size_t count, const SpectrumOptions& options = {});

/// Partial sums of sum n_lambda / |lambda|^(1 + epsilon) in |lambda| order.
TailSummary zero_density_diagnostic(const Spectrum& S, double epsilon);

/// index, re_lambda, im_lambda, multiplicity, abs_That, abs_That_n, sigma
void write_spectrum_csv(std::ostream& out, const Spectrum& S);

}  // namespace meanper
