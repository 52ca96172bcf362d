#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "meanper/quad.hpp"

namespace meanper {

enum class ConvolverKind { Gegenbauer, Weighted, Tent };

inline constexpr int kMaxDerivativeOrder = 8;

namespace detail {
struct RuleCache;
}

/// A compactly supported even profile T on [-r, r]:
///   Gegenbauer  (r^2 - t^2)^(alpha - 1/2)
///   Weighted    (r^2 - t^2)^(alpha - 1/2) h(t),  h(t) = sum_j h_j t^(2j)
///   Tent        max(0, 1 - |t| / r)
class Convolver {
public:
    static Convolver gegenbauer(double alpha, double r);
    static Convolver weighted(double alpha, double r, std::vector<double> h_coeffs);
    static Convolver tent(double r);

    ConvolverKind kind() const { return kind_; }
    /// Exponent parameter; 1/2 for the tent, whose profile has no weight.
    double alpha() const { return alpha_; }
    double radius() const { return r_; }
    const std::vector<double>& h_coeffs() const { return h_; }

    /// The even polynomial factor h; identically 1 unless kind is Weighted.
    double h(double t) const;
    double operator()(double t) const;
    std::string describe() const;

    detail::RuleCache& rule_cache() const { return *cache_; }

private:
    Convolver(ConvolverKind kind, double alpha, double r, std::vector<double> h);

    ConvolverKind kind_;
    double alpha_;
    double r_;
    std::vector<double> h_;
    std::shared_ptr<detail::RuleCache> cache_;
};

double eval_convolver(const Convolver& T, double t);

using TransformValue = Estimate;

/// Nodes and weights with sum_i w_i g(t_i) ~ int T(t) g(t) dt.
struct NodeSet {
    std::vector<double> t;
    std::vector<double> w;
};

/// Composite rule over supp T: `panels` Gauss-Legendre panels of `nodes`
/// points, split at profile kinks.
NodeSet support_nodes(const Convolver& T, std::size_t panels, std::size_t nodes = 16);

/// int T(t) g(t) dt on the composite rule.
cplx integrate_against(const Convolver& T, const std::function<cplx(double)>& g, std::size_t panels = 32);

/// Quadrature order actually used at z: `order`, raised so the rule
/// resolves the oscillation of e^{-izt} over the support.
std::size_t effective_order(const Convolver& T, cplx z, std::size_t order = kDefaultQuadOrder);

/// T^(z) = int T(t) e^{-izt} dt.
TransformValue fourier(const Convolver& T, cplx z, std::size_t order = kDefaultQuadOrder);

/// n-th derivative of T^ at z, n <= kMaxDerivativeOrder.
TransformValue fourier_derivative(const Convolver& T, cplx z, int n, std::size_t order = kDefaultQuadOrder);

/// T^(p)(z) for p < count in one pass, without an error estimate and without
/// the derivative cap (count <= simd::kMaxMoments).
std::vector<cplx> transform_derivatives(const Convolver& T, cplx z, std::size_t count,
                                        std::size_t order = kDefaultQuadOrder);

/// sqrt(pi) Gamma(alpha + 1/2) (2r)^alpha J_alpha(rz) / z^alpha, Gegenbauer only.
cplx fourier_closed_form(const Convolver& T, cplx z);

/// J_nu(x): ascending series for |x| <= nu + 12, Hankel asymptotic beyond.
double bessel_j(double nu, double x);
cplx bessel_j(double nu, cplx x);
double gamma_fn(double x);

namespace detail {
// The two branches of bessel_j, exposed for the crossover checks.
cplx bessel_j_series(double nu, cplx x);
cplx bessel_j_hankel(double nu, cplx x);
}  // namespace detail

}  // namespace meanper
