#include <doctest.h>

#include <cmath>
#include <numbers>

#include "meanper/convolver.hpp"
#include "meanper/error.hpp"
#include "oracles.hpp"

using namespace meanper;
using oracle::pi;

TEST_CASE("factories validate their parameters") {
    CHECK_THROWS_AS(Convolver::gegenbauer(-0.5, 1.0), Error);
    CHECK_THROWS_AS(Convolver::gegenbauer(0.5, 0.0), Error);
    CHECK_THROWS_AS(Convolver::weighted(0.5, 1.0, {}), Error);
    CHECK_THROWS_AS(Convolver::tent(-1.0), Error);
    CHECK_NOTHROW(Convolver::weighted(1.0, 2.0, {1.0, 0.5}));
}

TEST_CASE("profiles evaluate as defined and vanish off the support") {
    const Convolver g = Convolver::gegenbauer(1.5, 2.0);
    CHECK(g(1.0) == doctest::Approx(3.0));
    CHECK(g(2.5) == 0.0);
    const Convolver w = Convolver::weighted(0.5, 1.0, {1.0, 1.0});
    CHECK(w(0.5) == doctest::Approx(1.25));
    CHECK(w.h(0.5) == doctest::Approx(1.25));
    const Convolver t = Convolver::tent(2.0);
    CHECK(t(1.0) == doctest::Approx(0.5));
    CHECK(t(-2.5) == 0.0);
    CHECK(eval_convolver(t, 0.0) == 1.0);
}

TEST_CASE("transform at 0 is the total mass") {
    for (double alpha : {0.0, 0.5, 1.0, 2.5}) {
        const Convolver T = Convolver::gegenbauer(alpha, 1.3);
        const double mass = oracle::even_moment(alpha, 1.3, 0);
        CHECK(std::abs(fourier(T, 0.0).value - mass) < 1e-12 * mass);
    }
}

TEST_CASE("indicator transform is 2 sin(zr) / z, complex arguments included") {
    const Convolver T = Convolver::gegenbauer(0.5, 1.5);
    for (cplx z : {cplx(0.3, 0.0), cplx(7.0, 0.0), cplx(31.0, 0.0), cplx(2.0, 1.0), cplx(-4.0, -0.5)}) {
        const cplx ref = oracle::sinc_transform(z, 1.5);
        CHECK(std::abs(fourier(T, z).value - ref) < 1e-12 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("tent transform matches its closed form") {
    const Convolver T = Convolver::tent(0.8);
    for (cplx z : {cplx(0.5, 0.0), cplx(9.0, 0.0), cplx(40.0, 0.0), cplx(3.0, -0.7)}) {
        const cplx ref = oracle::tent_transform(z, 0.8);
        CHECK(std::abs(fourier(T, z).value - ref) < 1e-12 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("weighted transform matches the moment power series") {
    const std::vector<double> h = {1.0, 1.0};
    for (double alpha : {0.5, 1.0}) {
        const Convolver T = Convolver::weighted(alpha, 1.0, h);
        for (double z : {0.2, 3.0, 7.5, 11.0}) {
            const double ref = oracle::weighted_transform(alpha, 1.0, h, z);
            CHECK(std::abs(fourier(T, z).value - ref) < 1e-10 * (1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("Gegenbauer closed form agrees with quadrature") {
    for (double alpha : {0.5, 1.0, 1.5}) {
        const Convolver T = Convolver::gegenbauer(alpha, 1.0);
        for (double z = 0.1; z <= 50.0; z += 2.45) {
            const cplx c = fourier_closed_form(T, z);
            CHECK(std::abs(fourier(T, z).value - c) <= 1e-8 * (1.0 + std::abs(c)));
        }
    }
    CHECK_THROWS_AS(fourier_closed_form(Convolver::tent(1.0), 1.0), Error);
    CHECK_THROWS_AS(fourier_closed_form(Convolver::gegenbauer(1.0, 1.0), 0.0), Error);
}

TEST_CASE("derivatives match Cauchy-integral Taylor coefficients of the closed forms") {
    const Convolver T = Convolver::tent(1.0);
    const cplx z0{5.0, 0.3};
    const auto taylor = oracle::taylor([](cplx z) { return oracle::tent_transform(z, 1.0); }, z0, 1.0, 6);
    double factorial = 1.0;
    for (int n = 0; n < 6; ++n) {
        if (n > 0) factorial *= n;
        const TransformValue d = fourier_derivative(T, z0, n);
        CHECK(std::abs(d.value - taylor[n] * factorial) < 1e-9 * (1.0 + std::abs(d.value)));
        CHECK(d.error_estimate < 1e-8);
    }
    const auto all = transform_derivatives(T, z0, 6);
    for (int n = 0; n < 6; ++n) CHECK(std::abs(all[n] - fourier_derivative(T, z0, n).value) < 1e-12);
    CHECK_THROWS_AS(fourier_derivative(T, z0, 9), Error);
}

TEST_CASE("tent second derivative at its first double zero") {
    const Convolver T = Convolver::tent(1.0);
    CHECK(std::abs(fourier_derivative(T, 2 * pi, 2).value - 1.0 / (2 * pi * pi)) < 1e-12);
    CHECK(std::abs(fourier(T, 2 * pi).value) < 1e-14);
}

TEST_CASE("Bessel functions at tabulated values") {
    CHECK(bessel_j(0.0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
    CHECK(bessel_j(1.0, 10.0) == doctest::Approx(0.04347274616886144).epsilon(1e-12));
    CHECK(bessel_j(2.0, 30.0) == doctest::Approx(0.07845124607326535).epsilon(1e-12));
    CHECK(bessel_j(0.75, 15.0) == doctest::Approx(0.1827451273734891).epsilon(1e-12));
    CHECK(bessel_j(0.0, 15.0) == doctest::Approx(-0.01422447282678077).epsilon(1e-11));
    for (double x : {0.5, 3.0, 17.0, 60.0}) {
        CHECK(bessel_j(0.5, x) == doctest::Approx(std::sqrt(2.0 / (pi * x)) * std::sin(x)).epsilon(1e-12));
        CHECK(bessel_j(1.5, x) ==
              doctest::Approx(std::sqrt(2.0 / (pi * x)) * (std::sin(x) / x - std::cos(x))).epsilon(1e-11));
    }
}

TEST_CASE("Bessel series and Hankel branches agree at the crossover") {
    for (double nu : {0.5, 1.0, 1.5, 3.0}) {
        for (double x : {nu + 12.0, nu + 14.0}) {
            CHECK(std::abs(detail::bessel_j_series(nu, x) - detail::bessel_j_hankel(nu, x)) < 1e-11);
        }
    }
}

TEST_CASE("Bessel values against the ascending-series oracle") {
    for (double nu : {0.0, 0.75, 2.0}) {
        for (double x : {0.1, 2.0, 6.0, 9.0}) CHECK(std::abs(bessel_j(nu, x) - oracle::bessel_series(nu, x)) < 1e-12);
    }
}

TEST_CASE("gamma function") {
    CHECK(gamma_fn(5.0) == 24.0);
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(gamma_fn(2.5) == doctest::Approx(0.75 * std::sqrt(pi)).epsilon(1e-14));
    CHECK(gamma_fn(0.1) == doctest::Approx(std::tgamma(0.1)).epsilon(1e-13));
}

TEST_CASE("effective order grows with |z| r") {
    const Convolver T = Convolver::gegenbauer(1.0, 2.0);
    CHECK(effective_order(T, 1.0) == kDefaultQuadOrder);
    const std::size_t big = effective_order(T, 1000.0);
    CHECK(big >= 1800);
    CHECK(big % 32 == 0);
}

TEST_CASE("integrate_against and support_nodes integrate the profile") {
    const Convolver T = Convolver::weighted(1.0, 1.0, {1.0, 2.0});
    const double mass = oracle::even_moment(1.0, 1.0, 0) + 2.0 * oracle::even_moment(1.0, 1.0, 1);
    CHECK(std::abs(integrate_against(T, [](double) { return cplx(1.0); }) - mass) < 1e-12);
    const NodeSet nodes = support_nodes(Convolver::tent(1.0), 4);
    double sum = 0.0;
    for (double w : nodes.w) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("non-half-integer exponents: transform against the moment series") {
    for (double alpha : {-0.3, 0.2, 0.75, 1.3}) {
        const Convolver T = Convolver::gegenbauer(alpha, 1.0);
        for (double z : {0.0, 2.5, 9.0}) {
            const double ref = oracle::weighted_transform(alpha, 1.0, {1.0}, z);
            CHECK(std::abs(fourier(T, z).value - ref) < 1e-10 * (1.0 + std::abs(ref)));
        }
        for (double z : {20.0, 45.0}) {
            const cplx c = fourier_closed_form(T, z);
            CHECK(std::abs(fourier(T, z).value - c) < 1e-9 * (1.0 + std::abs(c)));
        }
    }
}
