#pragma once

// Data-parallel inner loops shared by the transform, kernel and synthesis
// code. Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant chosen at runtime. The two agree to rounding; the
// equivalence tests pin the tolerance.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace meanper::simd {

using cplx = std::complex<double>;

/// Largest number of moments exp_moments accumulates in one pass.
inline constexpr std::size_t kMaxMoments = 48;

/// coef * t^power * exp(i * freq * t)
struct SeriesTerm {
    cplx freq;
    cplx coef;
    int power = 0;
};

enum class Isa { Scalar, Avx2 };

/// out[p] = sum_i w[i] * x[i]^p * exp(-i z x[i]) for p < out.size().
void exp_moments(std::span<const double> x, std::span<const double> w, cplx z, std::span<cplx> out);

/// out[j] = sum_k terms[k].coef * t[j]^power * exp(i freq t[j]). Terms are
/// accumulated in the order given, independently for every t[j].
void exp_series(std::span<const double> t, std::span<const SeriesTerm> terms, std::span<cplx> out);

Isa active_isa();
bool isa_available(Isa isa);
/// Overrides runtime selection (tests, MEANPER_SIMD=scalar). Throws if the
/// requested variant was not compiled in or the CPU lacks it.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa);

namespace scalar {
void exp_moments(std::span<const double> x, std::span<const double> w, cplx z, std::span<cplx> out);
void exp_series(std::span<const double> t, std::span<const SeriesTerm> terms, std::span<cplx> out);
}  // namespace scalar

namespace avx2 {
void exp_moments(std::span<const double> x, std::span<const double> w, cplx z, std::span<cplx> out);
void exp_series(std::span<const double> t, std::span<const SeriesTerm> terms, std::span<cplx> out);
}  // namespace avx2

}  // namespace meanper::simd
