#include <doctest.h>

#include <cmath>
#include <numbers>

#include "meanper/convolver.hpp"
#include "meanper/error.hpp"
#include "meanper/quad.hpp"
#include "oracles.hpp"

using namespace meanper;

TEST_CASE("Gauss-Legendre rules are exact up to degree 2n - 1") {
    for (std::size_t n : {1u, 2u, 5u, 16u, 64u, 257u}) {
        const QuadratureRule rule = gauss_legendre(n);
        REQUIRE(rule.order() == n);
        for (std::size_t deg = 0; deg < 2 * n && deg <= 40; ++deg) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], static_cast<int>(deg));
            const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1.0);
            CHECK(std::abs(sum - exact) < 1e-13);
        }
    }
}

TEST_CASE("Gauss-Legendre nodes are ascending and symmetric") {
    const QuadratureRule rule = gauss_legendre(33);
    for (std::size_t i = 0; i + 1 < rule.order(); ++i) CHECK(rule.nodes[i] < rule.nodes[i + 1]);
    for (std::size_t i = 0; i < rule.order(); ++i) {
        CHECK(rule.nodes[i] == -rule.nodes[rule.order() - 1 - i]);
        CHECK(rule.weights[i] == rule.weights[rule.order() - 1 - i]);
    }
    CHECK(rule.nodes[16] == 0.0);
    CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("cached rules are shared") {
    auto a = cached_gauss_legendre(48);
    auto b = cached_gauss_legendre(48);
    CHECK(a.get() == b.get());
}

TEST_CASE("integrate_weighted reproduces Beta-function moments") {
    for (double alpha : {-0.25, 0.25, 0.5, 0.8, 1.0, 1.5, 3.0}) {
        for (double r : {0.5, 1.0, 2.0}) {
            for (int p = 0; p <= 4; ++p) {
                const Estimate e = integrate_weighted([p](double t) { return cplx(std::pow(t, 2 * p)); }, alpha, r, 128);
                const double exact = oracle::even_moment(alpha, r, p);
                CHECK(std::abs(e.value - exact) <= 1e-12 * std::max(1.0, exact));
                CHECK(std::abs(e.value - exact) <= e.error_estimate + 1e-13 * exact);
                CHECK(e.error_estimate < 1e-6 * std::max(1.0, exact));
            }
        }
    }
}

TEST_CASE("cumulative_weighted ends at the transform and agrees with Simpson") {
    const Convolver T = Convolver::gegenbauer(1.0, 1.0);
    const cplx lambda{4.0, 0.0};
    const std::vector<double> grid = {-1.0, -0.6, -0.1, 0.3, 0.95, 1.0};
    const auto G = cumulative_weighted(T, lambda, grid);
    CHECK(std::abs(G.front()) == 0.0);
    CHECK(std::abs(G.back() - fourier(T, lambda).value) < 1e-12);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const cplx ref = oracle::simpson(
            [&](double s) { return std::sqrt(1.0 - s * s) * std::exp(-cplx(0, 1) * lambda * s); }, -1.0, grid[i], 20000);
        CHECK(std::abs(G[i] - ref) < 1e-6);
    }
}

TEST_CASE("cumulative_moments: first moment of the indicator in closed form") {
    const Convolver T = Convolver::gegenbauer(0.5, 1.0);
    const double lambda = 2.5;
    const std::vector<double> grid = {-0.5, 0.0, 0.7};
    const auto G = cumulative_moments(T, lambda, grid, 2);
    const cplx I{0, 1};
    // antiderivative of s e^{-i lambda s}: (i s / lambda + 1 / lambda^2) e^{-i lambda s}
    auto anti = [&](double s) { return (I * s / lambda + 1.0 / (lambda * lambda)) * std::exp(-I * lambda * s); };
    auto anti0 = [&](double s) { return I / lambda * std::exp(-I * lambda * s); };
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(G[0][i] - (anti0(grid[i]) - anti0(-1.0))) < 1e-13);
        CHECK(std::abs(G[1][i] - (anti(grid[i]) - anti(-1.0))) < 1e-13);
    }
}

TEST_CASE("cumulative grids are validated") {
    const Convolver T = Convolver::tent(1.0);
    const std::vector<double> unsorted = {0.2, -0.2};
    const std::vector<double> outside = {-1.5, 0.0};
    CHECK_THROWS_AS(cumulative_weighted(T, 1.0, unsorted), Error);
    CHECK_THROWS_AS(cumulative_weighted(T, 1.0, outside), Error);
}
