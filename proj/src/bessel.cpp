#include <array>
#include <cmath>
#include <numbers>

#include "meanper/convolver.hpp"
#include "meanper/error.hpp"

namespace meanper {

double gamma_fn(double x) {
    require(std::isfinite(x) && x > 0.0, ErrorKind::InvalidArgument, "gamma_fn: x must be positive (poles unsupported)");
    if (x == std::floor(x) && x <= 23.0) {
        double fact = 1.0;
        for (double k = 2.0; k < x; k += 1.0) fact *= k;
        return fact;
    }
    if (x < 0.5) return gamma_fn(x + 1.0) / x;
    // Lanczos, g = 7, n = 9.
    static constexpr std::array<double, 9> kCoeff = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    const double y = x - 1.0;
    double series = kCoeff[0];
    for (std::size_t k = 1; k < kCoeff.size(); ++k) series += kCoeff[k] / (y + static_cast<double>(k));
    const double t = y + 7.5;
    const double result = std::sqrt(2.0 * std::numbers::pi) * std::pow(t, y + 0.5) * std::exp(-t) * series;
    require(std::isfinite(result), ErrorKind::Range, "gamma_fn: overflow");
    return result;
}

namespace detail {

cplx bessel_j_series(double nu, cplx x) {
    const double log_lead = std::lgamma(nu + 1.0);
    require(nu <= 170.0, ErrorKind::Range, "bessel_j: order too large");
    const cplx half = 0.5 * x;
    cplx term = (nu == 0.0 ? cplx(1.0) : std::pow(half, nu)) * std::exp(-log_lead);
    require(std::isfinite(term.real()) && std::isfinite(term.imag()), ErrorKind::Range, "bessel_j: overflow in series");
    const cplx step = -half * half;
    cplx sum = term;
    const double growth_end = std::abs(half);
    for (int k = 1; k < 1000; ++k) {
        term *= step / (static_cast<double>(k) * (static_cast<double>(k) + nu));
        sum += term;
        if (static_cast<double>(k) > growth_end && std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

cplx bessel_j_hankel(double nu, cplx x) {
    const double mu = 4.0 * nu * nu;
    cplx p = 1.0;
    cplx q = 0.0;
    cplx a = 1.0;
    double previous = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) / (static_cast<double>(k) * 8.0 * x);
        const double size = std::abs(a);
        if (size == 0.0 || size > previous) break;
        previous = size;
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if (size < 1e-17) break;
    }
    const cplx omega = x - (0.5 * nu + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(omega) - q * std::sin(omega));
}

}  // namespace detail

cplx bessel_j(double nu, cplx x) {
    require(nu > -1.0, ErrorKind::InvalidArgument, "bessel_j: order must exceed -1");
    if (x == cplx(0.0)) {
        require(nu >= 0.0, ErrorKind::Domain, "bessel_j: singular at 0 for negative order");
        return nu == 0.0 ? 1.0 : 0.0;
    }
    if (std::abs(x) <= nu + 12.0) return detail::bessel_j_series(nu, x);
    return detail::bessel_j_hankel(nu, x);
}

double bessel_j(double nu, double x) {
    require(x >= 0.0, ErrorKind::InvalidArgument, "bessel_j: x must be positive");
    return bessel_j(nu, cplx(x)).real();
}

}  // namespace meanper
