#include "cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "meanper/coeff.hpp"
#include "meanper/error.hpp"
#include "meanper/spectrum.hpp"

namespace meanper::cli {

namespace {

constexpr double kPi = std::numbers::pi;

Check check_below(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, value <= tolerance};
}

// Secant iteration on J_nu started from a nearby guess.
double bessel_zero(double nu, double guess) {
    double x0 = guess;
    double x1 = guess + 1e-3;
    double f0 = bessel_j(nu, x0);
    double f1 = bessel_j(nu, x1);
    for (int it = 0; it < 100 && f1 != f0; ++it) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = bessel_j(nu, x1);
        if (std::abs(x1 - x0) <= 1e-15 * std::abs(x1)) break;
    }
    return x1;
}

std::vector<const SpectralPoint*> positive_points(const Spectrum& S) {
    std::vector<const SpectralPoint*> out;
    for (const SpectralPoint& sp : S.points) {
        if (sp.lambda.real() > 0.0) out.push_back(&sp);
    }
    return out;
}

// max m |seed - zeta_m| over [5, 50] relative to its value at m = 5. When the
// seeds are exact (alpha = 1/2) the products are round-off and the ratio is
// reported as 0.
Check asymptotic_rate(const Convolver& T) {
    const Spectrum S = build_spectrum(T, 50);
    const auto seeds = predict_zeros(T, 50);
    const auto pos = positive_points(S);
    double first = 0.0;
    double worst = 0.0;
    for (std::size_t m = 5; m <= 50; ++m) {
        const double scaled = static_cast<double>(m) * std::abs(seeds[m - 1] - pos[m - 1]->lambda);
        if (m == 5) first = scaled;
        worst = std::max(worst, scaled);
    }
    const bool exact = worst <= 1e-8;
    return check_below("asymptotic_rate_growth", exact || first == 0.0 ? 0.0 : worst / first, 1.2);
}

// Least-squares slope of log sigma against log m over m in [50, 200].
Check sigma_slope(const Convolver& T, double expected) {
    Spectrum S = build_spectrum(T, 200);
    fill_sigma(S);
    const auto pos = positive_points(S);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (std::size_t m = 50; m <= 200; ++m) {
        const double x = std::log(static_cast<double>(m));
        const double y = std::log(*pos[m - 1]->sigma);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        n += 1;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return check_below("sigma_slope_deviation", std::abs(slope - expected), 0.1);
}

// Taylor coefficients of g at c by the trapezoid rule on |z - c| = rho.
std::vector<cplx> taylor(const std::function<cplx(cplx)>& g, cplx c, double rho, std::size_t count) {
    constexpr std::size_t nodes = 256;
    std::vector<cplx> coeffs(count);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double theta = 2.0 * kPi * static_cast<double>(k) / nodes;
        const cplx unit = std::polar(1.0, theta);
        const cplx value = g(c + rho * unit);
        for (std::size_t p = 0; p < count; ++p) coeffs[p] += value * std::pow(std::conj(unit), static_cast<int>(p));
    }
    for (std::size_t p = 0; p < count; ++p) coeffs[p] /= nodes * std::pow(rho, static_cast<int>(p));
    return coeffs;
}

std::vector<Check> bessel_suite(const RunConfig& cfg) {
    const double alpha = cfg.convolver.alpha;
    const double r = cfg.convolver.r;
    const Convolver T = Convolver::gegenbauer(alpha, r);
    std::vector<Check> checks;

    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
        const double z = 0.1 + (50.0 - 0.1) * i / 39.0;
        const cplx closed = fourier_closed_form(T, z);
        worst = std::max(worst, std::abs(fourier(T, z).value - closed) / (1.0 + std::abs(closed)));
    }
    checks.push_back(check_below("transform_vs_closed_form", worst, 1e-8));

    const std::size_t count = std::min<std::size_t>(cfg.run.cutoff, 100);
    const Spectrum S = build_spectrum(T, count);
    const auto seeds = predict_zeros(T, count);
    const auto pos = positive_points(S);
    double zero_err = 0.0;
    for (std::size_t m = 1; m <= count; ++m) {
        const double zeta = alpha == 0.5 ? kPi * static_cast<double>(m) / r : bessel_zero(alpha, r * seeds[m - 1].real()) / r;
        zero_err = std::max(zero_err, std::abs(pos[m - 1]->lambda - zeta));
    }
    checks.push_back(check_below("zeros_vs_bessel", zero_err, 1e-9));
    checks.push_back(check_below("spectrum_warnings", static_cast<double>(S.warnings.size()), 0.0));
    checks.push_back(asymptotic_rate(T));
    checks.push_back(sigma_slope(T, alpha + 0.5));
    return checks;
}

std::vector<Check> tent_suite(const RunConfig& cfg) {
    const double r = cfg.convolver.r;
    const Convolver T = Convolver::tent(r);
    std::vector<Check> checks;
    const Spectrum S = build_spectrum(T, 8);
    const auto pos = positive_points(S);

    double mult_err = 0.0;
    double loc_err = 0.0;
    for (std::size_t m = 1; m <= pos.size(); ++m) {
        mult_err = std::max(mult_err, std::abs(pos[m - 1]->multiplicity - 2.0));
        loc_err = std::max(loc_err, std::abs(pos[m - 1]->lambda - 2.0 * kPi * static_cast<double>(m) / r));
    }
    checks.push_back(check_below("multiplicity_two", mult_err, 0.0));
    checks.push_back(check_below("double_zero_location", loc_err, 1e-9));

    // a_j from the Taylor coefficients of the closed form: sum_j a_j t_{2+q-j} = delta_{q eta}/q!.
    const SpectralPoint& sp = *pos.front();
    const auto closed = [r](cplx z) { return 2.0 * (1.0 - std::cos(z * r)) / (z * z * r); };
    const auto t = taylor(closed, sp.lambda, 1.0, 4);
    double a_err = 0.0;
    double entire_err = 0.0;
    for (int eta = 0; eta <= 1; ++eta) {
        const cplx a0 = (eta == 0 ? 1.0 : 0.0) / t[2];
        const cplx a1 = ((eta == 1 ? 1.0 : 0.0) - a0 * t[3]) / t[2];
        const auto a = a_sequence(sp, eta);
        a_err = std::max({a_err, std::abs(a[0] - a0), std::abs(a[1] - a1)});

        const auto g = taylor([&](cplx z) { return interpolating_entire(T, sp, eta, z); }, sp.lambda, 0.5, 2);
        for (int q = 0; q <= 1; ++q) entire_err = std::max(entire_err, std::abs(g[q] - (q == eta ? 1.0 : 0.0)));
    }
    checks.push_back(check_below("a_sequence_vs_taylor", a_err, 1e-6));
    checks.push_back(check_below("interpolating_entire_taylor", entire_err, 1e-6));

    const cplx c1{0.3, 0.1};
    const cplx c0{1.0, -0.5};
    const auto f = FunctionSpec::exponential_sum({{sp.lambda, 1, c1}, {sp.lambda, 0, c0}, {-pos[1]->lambda, 0, 0.5}}, 3.0 * r);
    const auto table = extract_coefficients(f, T, S, default_probes(f, T));
    double extract_err = 0.0;
    for (const CoefficientEntry& e : table.entries) {
        cplx expected = 0.0;
        if (e.lambda == sp.lambda) expected = e.eta == 0 ? c0 : c1;
        if (e.lambda == -pos[1]->lambda && e.eta == 0) expected = 0.5;
        extract_err = std::max(extract_err, std::abs(e.c - expected));
    }
    checks.push_back(check_below("double_zero_extraction", extract_err, 1e-7));
    return checks;
}

// int_{-r}^{r} (r^2 - t^2)^(alpha - 1/2) h(t) e^{-izt} dt from the power series of cos
// and the Beta-function moments.
double weighted_series(double alpha, double r, const std::vector<double>& h, double z) {
    const double beta = alpha - 0.5;
    double total = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
        double term_sum = 0.0;
        double power = 1.0;   // (-1)^k z^{2k} / (2k)!
        for (int k = 0; k < 400; ++k) {
            const double p = static_cast<double>(j) + k;
            const double moment =
                std::exp(std::lgamma(p + 0.5) + std::lgamma(beta + 1.0) - std::lgamma(p + beta + 1.5)) *
                std::pow(r, 2.0 * beta + 2.0 * p + 1.0);
            const double term = power * moment;
            term_sum += term;
            if (k > 2.0 * z * r && std::abs(term) < 1e-18 * std::abs(term_sum)) break;
            power *= -z * z / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        }
        total += h[j] * term_sum;
    }
    return total;
}

std::vector<Check> weighted_suite(const RunConfig& cfg) {
    const double alpha = cfg.convolver.alpha;
    const double r = cfg.convolver.r;
    const std::vector<double> h =
        cfg.convolver.kind == "weighted" && !cfg.convolver.h_coeffs.empty() ? cfg.convolver.h_coeffs
                                                                            : std::vector<double>{1.0, 1.0};
    const Convolver T = Convolver::weighted(alpha, r, h);
    std::vector<Check> checks;

    double worst = 0.0;
    const double z_max = 12.0 / r;
    for (int i = 0; i < 40; ++i) {
        const double z = 0.1 + (z_max - 0.1) * i / 39.0;
        const double series = weighted_series(alpha, r, h, z);
        worst = std::max(worst, std::abs(fourier(T, z).value - series) / (1.0 + std::abs(series)));
    }
    checks.push_back(check_below("transform_vs_moment_series", worst, 1e-8));

    const Spectrum S = build_spectrum(T, std::min<std::size_t>(cfg.run.cutoff, 100));
    checks.push_back(check_below("spectrum_warnings", static_cast<double>(S.warnings.size()), 0.0));
    checks.push_back(asymptotic_rate(T));
    checks.push_back(sigma_slope(T, alpha + 0.5));
    return checks;
}

}  // namespace

std::vector<Check> run_suite(const std::string& suite, const RunConfig& cfg) {
    if (suite == "bessel") return bessel_suite(cfg);
    if (suite == "tent") return tent_suite(cfg);
    if (suite == "weighted") return weighted_suite(cfg);
    throw Error(ErrorKind::InvalidArgument, "verify: unknown suite '" + suite + "'");
}

}  // namespace meanper::cli
