#include "meanper/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <cstdint>

#include "meanper/error.hpp"

namespace meanper::simd::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

// pi/2 split in three parts; products with the quadrant index are exact
// under FMA for |j| < 2^30.
constexpr double kPio2Hi = 1.5707963267948966;
constexpr double kPio2Mid = 6.123233995736766e-17;
constexpr double kPio2Lo = -1.4973849048591698e-33;
constexpr double kTwoOverPi = 0.63661977236758134308;
constexpr double kMagic = 6755399441055744.0;  // 1.5 * 2^52

// Minimax coefficients on [-pi/4, pi/4] (fdlibm kernel_sin / kernel_cos).
constexpr double kS1 = -1.66666666666666324348e-01;
constexpr double kS2 = 8.33333333332248946124e-03;
constexpr double kS3 = -1.98412698298579493134e-04;
constexpr double kS4 = 2.75573137070700676789e-06;
constexpr double kS5 = -2.50507602534068634195e-08;
constexpr double kS6 = 1.58969099521155010221e-10;
constexpr double kC1 = 4.16666666666666019037e-02;
constexpr double kC2 = -1.38888888888741095749e-03;
constexpr double kC3 = 2.48015872894767294178e-05;
constexpr double kC4 = -2.75573143513906633035e-07;
constexpr double kC5 = 2.08757232129817482790e-09;
constexpr double kC6 = -1.13596475577881948265e-11;

inline __m256d splat(double v) { return _mm256_set1_pd(v); }

inline void sincos4(__m256d x, __m256d& s, __m256d& c) {
    const __m256d j = _mm256_round_pd(_mm256_mul_pd(x, splat(kTwoOverPi)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(j, splat(kPio2Hi), x);
    r = _mm256_fnmadd_pd(j, splat(kPio2Mid), r);
    r = _mm256_fnmadd_pd(j, splat(kPio2Lo), r);

    const __m256d z = _mm256_mul_pd(r, r);
    __m256d ps = _mm256_fmadd_pd(splat(kS6), z, splat(kS5));
    ps = _mm256_fmadd_pd(ps, z, splat(kS4));
    ps = _mm256_fmadd_pd(ps, z, splat(kS3));
    ps = _mm256_fmadd_pd(ps, z, splat(kS2));
    ps = _mm256_fmadd_pd(ps, z, splat(kS1));
    const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

    __m256d pc = _mm256_fmadd_pd(splat(kC6), z, splat(kC5));
    pc = _mm256_fmadd_pd(pc, z, splat(kC4));
    pc = _mm256_fmadd_pd(pc, z, splat(kC3));
    pc = _mm256_fmadd_pd(pc, z, splat(kC2));
    pc = _mm256_fmadd_pd(pc, z, splat(kC1));
    const __m256d cos_r = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc, _mm256_fnmadd_pd(splat(0.5), z, splat(1.0)));

    const __m256i q = _mm256_castpd_si256(_mm256_add_pd(j, splat(kMagic)));
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i two = _mm256_set1_epi64x(2);
    const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
    const __m256d sign_s = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(q, two), 62));
    const __m256d sign_c = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), 62));

    s = _mm256_xor_pd(_mm256_blendv_pd(sin_r, cos_r, swap), sign_s);
    c = _mm256_xor_pd(_mm256_blendv_pd(cos_r, sin_r, swap), sign_c);
}

constexpr double kLog2e = 1.4426950408889634;
constexpr double kLn2Hi = 0.6931471805599453;
constexpr double kLn2Lo = 2.3190468138462996e-17;

inline __m256d exp4(__m256d x) {
    x = _mm256_max_pd(_mm256_min_pd(x, splat(708.0)), splat(-708.0));
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, splat(kLog2e)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, splat(kLn2Hi), x);
    r = _mm256_fnmadd_pd(n, splat(kLn2Lo), r);
    // Taylor to degree 13 on |r| <= ln2/2.
    static constexpr std::array<double, 14> kInvFact = {
        1.0, 1.0, 1.0 / 2, 1.0 / 6, 1.0 / 24, 1.0 / 120, 1.0 / 720, 1.0 / 5040, 1.0 / 40320,
        1.0 / 362880, 1.0 / 3628800, 1.0 / 39916800, 1.0 / 479001600, 1.0 / 6227020800.0};
    __m256d p = splat(kInvFact[13]);
    for (int k = 12; k >= 0; --k) p = _mm256_fmadd_pd(p, r, splat(kInvFact[static_cast<std::size_t>(k)]));
    const __m256i ni = _mm256_castpd_si256(_mm256_add_pd(n, splat(kMagic)));
    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

inline double hsum(__m256d v) {
    alignas(32) std::array<double, kLanes> lanes;
    _mm256_store_pd(lanes.data(), v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

void exp_moments(std::span<const double> x, std::span<const double> w, cplx z, std::span<cplx> out) {
    require(x.size() == w.size(), ErrorKind::InvalidArgument, "exp_moments: node/weight size mismatch");
    require(out.size() <= kMaxMoments, ErrorKind::InvalidArgument, "exp_moments: too many moments");
    const std::size_t moments = out.size();
    __m256d acc_re[kMaxMoments];
    __m256d acc_im[kMaxMoments];
    for (std::size_t p = 0; p < moments; ++p) acc_re[p] = acc_im[p] = _mm256_setzero_pd();

    const __m256d zr = splat(z.real());
    const __m256d zi = splat(z.imag());
    const bool damped = z.imag() != 0.0;

    auto block = [&](__m256d xv, __m256d wv) {
        const __m256d amp = damped ? _mm256_mul_pd(wv, exp4(_mm256_mul_pd(zi, xv))) : wv;
        __m256d s;
        __m256d c;
        sincos4(_mm256_mul_pd(zr, xv), s, c);
        __m256d vr = _mm256_mul_pd(amp, c);
        __m256d vi = _mm256_xor_pd(_mm256_mul_pd(amp, s), splat(-0.0));
        for (std::size_t p = 0; p < moments; ++p) {
            acc_re[p] = _mm256_add_pd(acc_re[p], vr);
            acc_im[p] = _mm256_add_pd(acc_im[p], vi);
            vr = _mm256_mul_pd(vr, xv);
            vi = _mm256_mul_pd(vi, xv);
        }
    };

    const std::size_t n = x.size();
    const std::size_t full = n - n % kLanes;
    for (std::size_t i = 0; i < full; i += kLanes) block(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(w.data() + i));
    if (full < n) {
        alignas(32) std::array<double, kLanes> xt{};
        alignas(32) std::array<double, kLanes> wt{};
        for (std::size_t i = full; i < n; ++i) {
            xt[i - full] = x[i];
            wt[i - full] = w[i];
        }
        block(_mm256_load_pd(xt.data()), _mm256_load_pd(wt.data()));
    }
    for (std::size_t p = 0; p < moments; ++p) out[p] = {hsum(acc_re[p]), hsum(acc_im[p])};
}

void exp_series(std::span<const double> t, std::span<const SeriesTerm> terms, std::span<cplx> out) {
    require(t.size() == out.size(), ErrorKind::InvalidArgument, "exp_series: output size mismatch");

    auto block = [&](__m256d tv, double* re_out, double* im_out) {
        __m256d acc_re = _mm256_setzero_pd();
        __m256d acc_im = _mm256_setzero_pd();
        for (const SeriesTerm& term : terms) {
            __m256d s;
            __m256d c;
            sincos4(_mm256_mul_pd(splat(term.freq.real()), tv), s, c);
            __m256d vr = c;
            __m256d vi = s;
            if (term.freq.imag() != 0.0) {
                const __m256d amp = exp4(_mm256_mul_pd(splat(-term.freq.imag()), tv));
                vr = _mm256_mul_pd(vr, amp);
                vi = _mm256_mul_pd(vi, amp);
            }
            for (int p = 0; p < term.power; ++p) {
                vr = _mm256_mul_pd(vr, tv);
                vi = _mm256_mul_pd(vi, tv);
            }
            const __m256d cr = splat(term.coef.real());
            const __m256d ci = splat(term.coef.imag());
            acc_re = _mm256_add_pd(acc_re, _mm256_fmsub_pd(cr, vr, _mm256_mul_pd(ci, vi)));
            acc_im = _mm256_add_pd(acc_im, _mm256_fmadd_pd(cr, vi, _mm256_mul_pd(ci, vr)));
        }
        _mm256_store_pd(re_out, acc_re);
        _mm256_store_pd(im_out, acc_im);
    };

    alignas(32) std::array<double, kLanes> tt{};
    alignas(32) std::array<double, kLanes> re{};
    alignas(32) std::array<double, kLanes> im{};
    for (std::size_t j = 0; j < t.size(); j += kLanes) {
        const std::size_t count = std::min(kLanes, t.size() - j);
        tt.fill(0.0);
        for (std::size_t l = 0; l < count; ++l) tt[l] = t[j + l];
        block(_mm256_load_pd(tt.data()), re.data(), im.data());
        for (std::size_t l = 0; l < count; ++l) out[j + l] = {re[l], im[l]};
    }
}

}  // namespace meanper::simd::avx2
