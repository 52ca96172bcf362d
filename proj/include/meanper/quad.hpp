#pragma once

// Quadrature primitives: Gauss-Legendre rules, integrals against the
// (r^2 - t^2)^(alpha - 1/2) endpoint weight, and running integrals
// t -> int_{-r}^{t} T(s) e^{-i lambda s} ds used to build biorthogonal kernels.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace meanper {

using cplx = std::complex<double>;

class Convolver;

inline constexpr std::size_t kDefaultQuadOrder = 256;

/// Gauss-Legendre rule on [-1, 1]; nodes ascending and exactly symmetric.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t order() const { return nodes.size(); }
};

/// A quadrature value together with the difference between two orders,
/// used as its error estimate.
struct Estimate {
    cplx value;
    double error_estimate = 0.0;
};

QuadratureRule gauss_legendre(std::size_t order);

/// Process-wide memoized gauss_legendre; safe to call concurrently.
std::shared_ptr<const QuadratureRule> cached_gauss_legendre(std::size_t order);

/// int_{-r}^{r} (r^2 - t^2)^(alpha - 1/2) g(t) dt through t = r cos(theta), so
/// the weight becomes r^(2 alpha) sin^(2 alpha)(theta) and the endpoint
/// singularity disappears. Error estimate: |I(order) - I(order / 2)|.
Estimate integrate_weighted(const std::function<cplx(double)>& g, double alpha, double r,
                            std::size_t order = kDefaultQuadOrder);

/// G0(t_i) = int_{-r}^{t_i} T(s) e^{-i lambda s} ds on a sorted grid inside
/// the support, by composite panels whose count grows with |lambda| r.
std::vector<cplx> cumulative_weighted(const Convolver& T, cplx lambda, std::span<const double> grid);

/// Gp(t_i) = int_{-r}^{t_i} s^p T(s) e^{-i lambda s} ds for p < moments.
/// Result is indexed [p][i].
std::vector<std::vector<cplx>> cumulative_moments(const Convolver& T, cplx lambda, std::span<const double> grid,
                                                  std::size_t moments);

}  // namespace meanper
