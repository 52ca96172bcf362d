#include "meanper/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "meanper/csv.hpp"
#include "meanper/error.hpp"
#include "meanper/parallel.hpp"

namespace meanper {

namespace {

constexpr double kDedupTolerance = 1e-6;

std::string show(cplx z) {
    std::ostringstream out;
    out.precision(12);
    out << z.real();
    if (z.imag() != 0.0) out << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return out.str();
}

// Newton on T^(n-1), whose zero at lambda is simple when T^ has multiplicity n.
cplx polish_multiple(const Convolver& T, cplx z, int n, double tol, std::size_t order) {
    const auto k = static_cast<std::size_t>(n);
    for (int iter = 0; iter < 20; ++iter) {
        const auto d = transform_derivatives(T, z, k + 1, order);
        if (d[k] == cplx(0.0)) break;
        const cplx step = d[k - 1] / d[k];
        z -= step;
        if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

}  // namespace

double SpectralPoint::scale() const {
    const auto n = static_cast<std::size_t>(multiplicity);
    return n < derivs.size() ? std::max(1.0, std::abs(derivs[n])) : 1.0;
}

std::vector<cplx> predict_zeros(const Convolver& T, std::size_t count) {
    std::vector<cplx> seeds;
    seeds.reserve(count);
    const double r = T.radius();
    const double alpha = T.alpha();
    for (std::size_t j = 0; j < count; ++j) {
        const double k = static_cast<double>(j);
        switch (T.kind()) {
        case ConvolverKind::Gegenbauer:
            seeds.emplace_back(std::numbers::pi * (k + 1.0 + (2.0 * alpha - 1.0) / 4.0) / r);
            break;
        case ConvolverKind::Weighted:
            seeds.emplace_back(std::numbers::pi * (1.5 + alpha + 2.0 * k) / (2.0 * r));
            break;
        case ConvolverKind::Tent:
            seeds.emplace_back(2.0 * std::numbers::pi * (k + 1.0) / r);
            break;
        }
    }
    return seeds;
}

cplx refine_zero(const Convolver& T, cplx seed, double tol, int max_iter, std::size_t order) {
    require(tol > 0.0, ErrorKind::InvalidArgument, "refine_zero: tol must be positive");
    cplx z = seed;
    auto d = transform_derivatives(T, z, 2, order);
    for (int iter = 0; iter < max_iter; ++iter) {
        const double residual = std::abs(d[0]);
        if (residual <= tol * std::max(1.0, std::abs(d[1]))) {
            // A last step sharpens a simple zero; near a multiple zero the
            // quotient is round-off noise and is skipped.
            if (d[1] != cplx(0.0)) {
                const cplx step = d[0] / d[1];
                if (std::abs(step) <= 1e-6 * std::max(1.0, std::abs(z))) z -= step;
            }
            return z;
        }
        if (d[1] == cplx(0.0)) break;
        cplx step = d[0] / d[1];
        cplx next = z - step;
        auto dn = transform_derivatives(T, next, 2, order);
        for (int halving = 0; halving < 8 && std::abs(dn[0]) > residual; ++halving) {
            step *= 0.5;
            next = z - step;
            dn = transform_derivatives(T, next, 2, order);
        }
        z = next;
        d = dn;
        if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) return z;
    }
    throw NoConvergenceError("refine_zero: Newton did not converge from seed " + show(seed) + " (last iterate " +
                                 show(z) + ")",
                             z, std::abs(d[0]));
}

int multiplicity(const Convolver& T, cplx lambda, double radius, int nodes, std::size_t order) {
    require(radius > 0.0, ErrorKind::InvalidArgument, "multiplicity: radius must be positive");
    require(nodes >= 8, ErrorKind::InvalidArgument, "multiplicity: need at least 8 contour nodes");
    cplx sum = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nodes);
        const cplx offset = std::polar(radius, phi);
        const auto d = transform_derivatives(T, lambda + offset, 2, order);
        if (d[0] == cplx(0.0)) {
            throw Error(ErrorKind::AmbiguousCount, "multiplicity: T^ vanishes on the contour around " + show(lambda));
        }
        sum += d[1] / d[0] * offset;
    }
    const cplx count = sum / static_cast<double>(nodes);
    const double rounded = std::round(count.real());
    const double defect = std::abs(count - rounded);
    if (defect >= 0.1) {
        std::ostringstream msg;
        msg << "multiplicity: winding number " << show(count) << " around " << show(lambda)
            << " is not near an integer; use a smaller radius or more nodes";
        throw Error(ErrorKind::AmbiguousCount, msg.str());
    }
    return static_cast<int>(rounded);
}

Spectrum build_spectrum(const Convolver& T, std::size_t count, const SpectrumOptions& options) {
    require(count >= 1, ErrorKind::InvalidArgument, "build_spectrum: count must be positive");
    Spectrum spectrum{{}, T, count, {}};
    const std::vector<cplx> seeds = predict_zeros(T, count);

    std::vector<cplx> refined(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        refined[i] = refine_zero(T, seeds[i], options.tol, options.max_iter, options.quad_order);
    });

    // Keep the first zero of every 1e-6 cluster, in seed order.
    std::vector<cplx> zeros;
    for (std::size_t i = 0; i < refined.size(); ++i) {
        cplx z = refined[i];
        if (z.real() < 0.0) z = -z;
        const bool duplicate = std::any_of(zeros.begin(), zeros.end(),
                                           [&](cplx kept) { return std::abs(kept - z) < kDedupTolerance; });
        if (duplicate) {
            spectrum.warnings.push_back("seed " + show(seeds[i]) + " converged onto an already found zero " + show(z));
            continue;
        }
        zeros.push_back(z);
    }

    std::vector<SpectralPoint> positive(zeros.size());
    parallel_for(zeros.size(), [&](std::size_t i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < zeros.size(); ++j) {
            if (j != i) nearest = std::min(nearest, std::abs(zeros[j] - zeros[i]));
            nearest = std::min(nearest, std::abs(zeros[j] + zeros[i]));
        }
        const double radius = std::min(0.5, 0.5 * nearest);
        SpectralPoint& sp = positive[i];
        try {
            sp.multiplicity = multiplicity(T, zeros[i], radius, options.contour_nodes, options.quad_order);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " (seed " + show(seeds[i]) + ")");
        }
        if (sp.multiplicity < 1) {
            throw Error(ErrorKind::AmbiguousCount,
                        "build_spectrum: refined point " + show(zeros[i]) + " encloses no zero (seed " + show(seeds[i]) + ")");
        }
        sp.lambda = sp.multiplicity > 1 ? polish_multiple(T, zeros[i], sp.multiplicity, options.tol, options.quad_order)
                                        : zeros[i];
        // T real and even makes T^ real on the axis; zeros come in conjugate
        // pairs, so one counted alone this close to the axis is real.
        if (std::abs(sp.lambda.imag()) <= 1e-10 * std::max(1.0, std::abs(sp.lambda.real()))) {
            sp.lambda = {sp.lambda.real(), 0.0};
        }
        sp.m = sp.multiplicity - 1;
        sp.derivs = transform_derivatives(T, sp.lambda, 2 * static_cast<std::size_t>(sp.multiplicity) + 1,
                                          options.quad_order);
    });

    for (const SpectralPoint& sp : positive) {
        const double scale = sp.scale();
        const auto n = static_cast<std::size_t>(sp.multiplicity);
        bool ok = std::abs(sp.derivs[0]) <= 1e-9 * scale && std::abs(sp.derivs[n]) > 1e-6 * scale;
        for (std::size_t j = 1; j < n; ++j) ok = ok && std::abs(sp.derivs[j]) <= 1e-6 * scale;
        if (!ok) spectrum.warnings.push_back("residual check failed at " + show(sp.lambda));
        if (std::abs(sp.lambda.imag()) > 1e-8) spectrum.warnings.push_back("zero off the real axis: " + show(sp.lambda));
    }

    // T^ is even, so T^(j)(-lambda) = (-1)^j T^(j)(lambda).
    for (const SpectralPoint& sp : positive) {
        spectrum.points.push_back(sp);
        SpectralPoint mirror = sp;
        mirror.lambda = -sp.lambda;
        for (std::size_t j = 1; j < mirror.derivs.size(); j += 2) mirror.derivs[j] = -mirror.derivs[j];
        spectrum.points.push_back(std::move(mirror));
    }
    std::stable_sort(spectrum.points.begin(), spectrum.points.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
        const double ma = std::abs(a.lambda);
        const double mb = std::abs(b.lambda);
        if (ma != mb) return ma < mb;
        return a.lambda.real() > b.lambda.real();
    });
    for (std::size_t i = 0; i < spectrum.points.size(); ++i) spectrum.points[i].index = i;
    return spectrum;
}

TailSummary zero_density_diagnostic(const Spectrum& S, double epsilon) {
    require(!S.points.empty(), ErrorKind::InvalidArgument, "zero_density_diagnostic: empty spectrum");
    require(epsilon > 0.0, ErrorKind::InvalidArgument, "zero_density_diagnostic: epsilon must be positive");
    std::vector<double> terms;
    terms.reserve(S.points.size());
    for (const SpectralPoint& sp : S.points) {
        terms.push_back(static_cast<double>(sp.multiplicity) / std::pow(std::abs(sp.lambda), 1.0 + epsilon));
    }
    return summarize_tail(terms);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& S) {
    csv::Writer w(out, {"index", "re_lambda", "im_lambda", "multiplicity", "abs_That", "abs_That_n", "sigma"});
    for (const SpectralPoint& sp : S.points) {
        w << sp.index << sp.lambda.real() << sp.lambda.imag() << sp.multiplicity << std::abs(sp.derivs.at(0))
          << std::abs(sp.derivs.at(static_cast<std::size_t>(sp.multiplicity)));
        if (sp.sigma) {
            w << *sp.sigma;
        } else {
            w << std::string_view{};
        }
        w.row();
    }
}

}  // namespace meanper
