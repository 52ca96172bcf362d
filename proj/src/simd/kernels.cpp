#include "meanper/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "meanper/error.hpp"

namespace meanper::simd {

namespace {

bool cpu_has_avx2() {
#if defined(MEANPER_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    if (const char* env = std::getenv("MEANPER_SIMD")) {
        if (std::string(env) == "scalar") return Isa::Scalar;
    }
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

void set_isa(Isa isa) {
    require(isa_available(isa), ErrorKind::InvalidArgument,
            "SIMD variant " + std::string(isa_name(isa)) + " is not available on this machine");
    current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

void exp_moments(std::span<const double> x, std::span<const double> w, cplx z, std::span<cplx> out) {
#if defined(MEANPER_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::exp_moments(x, w, z, out);
#endif
    scalar::exp_moments(x, w, z, out);
}

void exp_series(std::span<const double> t, std::span<const SeriesTerm> terms, std::span<cplx> out) {
#if defined(MEANPER_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::exp_series(t, terms, out);
#endif
    scalar::exp_series(t, terms, out);
}

}  // namespace meanper::simd

#if !defined(MEANPER_HAVE_AVX2)
namespace meanper::simd::avx2 {

void exp_moments(std::span<const double>, std::span<const double>, cplx, std::span<cplx>) {
    throw Error(ErrorKind::InvalidArgument, "AVX2 kernels were not compiled in");
}

void exp_series(std::span<const double>, std::span<const SeriesTerm>, std::span<cplx>) {
    throw Error(ErrorKind::InvalidArgument, "AVX2 kernels were not compiled in");
}

}  // namespace meanper::simd::avx2
#endif
