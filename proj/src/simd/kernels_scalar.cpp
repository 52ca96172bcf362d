#include "meanper/simd/kernels.hpp"

#include <array>
#include <cmath>

#include "meanper/error.hpp"

namespace meanper::simd::scalar {

void exp_moments(std::span<const double> x, std::span<const double> w, cplx z, std::span<cplx> out) {
    require(x.size() == w.size(), ErrorKind::InvalidArgument, "exp_moments: node/weight size mismatch");
    require(out.size() <= kMaxMoments, ErrorKind::InvalidArgument, "exp_moments: too many moments");
    std::array<double, kMaxMoments> re{};
    std::array<double, kMaxMoments> im{};
    const double zr = z.real();
    const double zi = z.imag();
    const std::size_t moments = out.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double amp = zi == 0.0 ? w[i] : w[i] * std::exp(zi * x[i]);
        const double phase = zr * x[i];
        double vr = amp * std::cos(phase);
        double vi = -amp * std::sin(phase);
        for (std::size_t p = 0; p < moments; ++p) {
            re[p] += vr;
            im[p] += vi;
            vr *= x[i];
            vi *= x[i];
        }
    }
    for (std::size_t p = 0; p < moments; ++p) out[p] = {re[p], im[p]};
}

void exp_series(std::span<const double> t, std::span<const SeriesTerm> terms, std::span<cplx> out) {
    require(t.size() == out.size(), ErrorKind::InvalidArgument, "exp_series: output size mismatch");
    for (std::size_t j = 0; j < t.size(); ++j) {
        double acc_re = 0.0;
        double acc_im = 0.0;
        for (const SeriesTerm& term : terms) {
            const double amp = term.freq.imag() == 0.0 ? 1.0 : std::exp(-term.freq.imag() * t[j]);
            const double phase = term.freq.real() * t[j];
            double vr = amp * std::cos(phase);
            double vi = amp * std::sin(phase);
            for (int p = 0; p < term.power; ++p) {
                vr *= t[j];
                vi *= t[j];
            }
            acc_re += term.coef.real() * vr - term.coef.imag() * vi;
            acc_im += term.coef.real() * vi + term.coef.imag() * vr;
        }
        out[j] = {acc_re, acc_im};
    }
}

}  // namespace meanper::simd::scalar
