#include <doctest.h>

#include <random>
#include <vector>

#include "meanper/simd/kernels.hpp"

using namespace meanper::simd;

namespace {

double max_rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double scale = 1.0;
    for (const cplx& v : a) scale = std::max(scale, std::abs(v));
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d / scale;
}

}  // namespace

TEST_CASE("scalar exp_moments against a direct sum") {
    const std::vector<double> x = {-0.9, -0.2, 0.1, 0.5, 0.75};
    const std::vector<double> w = {0.1, 0.2, 0.3, 0.25, 0.15};
    const cplx z{3.5, -0.4};
    std::vector<cplx> out(4);
    scalar::exp_moments(x, w, z, out);
    for (std::size_t p = 0; p < out.size(); ++p) {
        cplx expected = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            expected += w[i] * std::pow(x[i], static_cast<int>(p)) * std::exp(-cplx(0, 1) * z * x[i]);
        }
        CHECK(std::abs(out[p] - expected) < 1e-14);
    }
}

TEST_CASE("scalar exp_series against a direct sum") {
    const std::vector<SeriesTerm> terms = {{{2.0, 0.0}, {1.0, 0.5}, 0}, {{-1.5, 0.2}, {0.0, 2.0}, 2}};
    const std::vector<double> t = {-3.0, -0.5, 0.0, 1.25, 4.0};
    std::vector<cplx> out(t.size());
    scalar::exp_series(t, terms, out);
    for (std::size_t j = 0; j < t.size(); ++j) {
        cplx expected = 0.0;
        for (const auto& term : terms) {
            expected += term.coef * std::pow(t[j], term.power) * std::exp(cplx(0, 1) * term.freq * t[j]);
        }
        CHECK(std::abs(out[j] - expected) < 1e-13);
    }
}

TEST_CASE("AVX2 kernels match the scalar reference") {
    if (!isa_available(Isa::Avx2)) {
        MESSAGE("AVX2 variant not available on this machine; skipped");
        return;
    }
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t n : {1u, 3u, 4u, 7u, 16u, 33u, 257u}) {
        for (double span : {1.0, 40.0, 400.0}) {
            std::vector<double> x(n), w(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = span * unit(rng);
                w[i] = unit(rng);
            }
            const cplx z{3.0 * unit(rng), 0.05 * unit(rng)};
            std::vector<cplx> a(5), b(5);
            scalar::exp_moments(x, w, z, a);
            avx2::exp_moments(x, w, z, b);
            CHECK(max_rel_diff(a, b) < 1e-12);

            std::vector<SeriesTerm> terms;
            for (int k = 0; k < 9; ++k) {
                terms.push_back({{10.0 * unit(rng), 0.01 * unit(rng)}, {unit(rng), unit(rng)}, k % 3});
            }
            std::vector<cplx> sa(n), sb(n);
            scalar::exp_series(x, terms, sa);
            avx2::exp_series(x, terms, sb);
            CHECK(max_rel_diff(sa, sb) < 1e-12);
        }
    }
}

TEST_CASE("AVX2 exp_series is independent of block alignment") {
    if (!isa_available(Isa::Avx2)) return;
    std::vector<double> t(37);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = -5.0 + 0.27 * static_cast<double>(i);
    const std::vector<SeriesTerm> terms = {{{3.1, 0.0}, {0.5, -0.5}, 1}, {{-3.1, 0.0}, {0.5, 0.5}, 1}};
    std::vector<cplx> whole(t.size());
    avx2::exp_series(t, terms, whole);
    for (std::size_t offset : {1u, 2u, 3u, 5u}) {
        std::vector<cplx> part(t.size() - offset);
        avx2::exp_series(std::span(t).subspan(offset), terms, part);
        for (std::size_t i = 0; i < part.size(); ++i) CHECK(part[i] == whole[i + offset]);
    }
}

TEST_CASE("dispatch can be forced to the scalar path") {
    const Isa before = active_isa();
    set_isa(Isa::Scalar);
    CHECK(active_isa() == Isa::Scalar);
    CHECK(isa_name(Isa::Scalar) == "scalar");
    set_isa(before);
    CHECK(active_isa() == before);
}

TEST_CASE("empty inputs are harmless") {
    std::vector<cplx> out(3, cplx(7.0));
    exp_moments({}, {}, cplx(1.0), out);
    for (const cplx& v : out) CHECK(v == cplx(0.0));
    std::vector<cplx> none;
    exp_series({}, {}, none);
}
