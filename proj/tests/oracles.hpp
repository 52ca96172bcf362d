#pragma once

// Reference computations used by the tests. None of them goes through the
// library's quadrature or recursion code.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

/// int_{-r}^{r} (r^2 - t^2)^(alpha - 1/2) t^(2p) dt
inline double even_moment(double alpha, double r, int p) {
    const double beta = alpha - 0.5;
    return std::exp(std::lgamma(p + 0.5) + std::lgamma(beta + 1.0) - std::lgamma(p + beta + 1.5)) *
           std::pow(r, 2.0 * beta + 2.0 * p + 1.0);
}

/// int (r^2 - t^2)^(alpha - 1/2) h(t) cos(zt) dt by the power series of cos.
inline double weighted_transform(double alpha, double r, const std::vector<double>& h, double z) {
    double total = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
        double sum = 0.0;
        double power = 1.0;
        for (int k = 0; k < 500; ++k) {
            const double term = power * even_moment(alpha, r, static_cast<int>(j) + k);
            sum += term;
            if (k > 2.0 * z * r + 4 && std::abs(term) < 1e-18 * std::abs(sum)) break;
            power *= -z * z / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        }
        total += h[j] * sum;
    }
    return total;
}

/// Tent profile transform 2 (1 - cos zr) / (z^2 r).
inline cplx tent_transform(cplx z, double r) {
    return 2.0 * (1.0 - std::cos(z * r)) / (z * z * r);
}

/// Indicator of [-r, r] (alpha = 1/2): 2 sin(zr) / z.
inline cplx sinc_transform(cplx z, double r) {
    return 2.0 * std::sin(z * r) / z;
}

/// Taylor coefficients of g at c: trapezoid rule for the Cauchy integral on |z - c| = rho.
inline std::vector<cplx> taylor(const std::function<cplx(cplx)>& g, cplx c, double rho, std::size_t count,
                                std::size_t nodes = 256) {
    std::vector<cplx> out(count);
    for (std::size_t k = 0; k < nodes; ++k) {
        const cplx unit = std::polar(1.0, 2.0 * pi * static_cast<double>(k) / static_cast<double>(nodes));
        const cplx v = g(c + rho * unit);
        cplx power = 1.0;
        for (std::size_t p = 0; p < count; ++p) {
            out[p] += v * power;
            power *= std::conj(unit);
        }
    }
    double scale = 1.0;
    for (std::size_t p = 0; p < count; ++p) {
        out[p] /= static_cast<double>(nodes) * scale;
        scale *= rho;
    }
    return out;
}

/// Composite Simpson rule on [a, b] with n (even) intervals.
inline cplx simpson(const std::function<cplx(double)>& g, double a, double b, int n) {
    const double h = (b - a) / n;
    cplx sum = g(a) + g(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(a + h * i);
    return sum * h / 3.0;
}

/// J_nu(x) from the ascending series; fine for x up to about 20.
inline double bessel_series(double nu, double x) {
    double term = std::pow(0.5 * x, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 300; ++k) {
        term *= -(0.25 * x * x) / (k * (k + nu));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > x) break;
    }
    return sum;
}

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
