#include "doctest.h"

#include <initializer_list>
#include <stdexcept>

#include <cmath>

#include "diffusia/special_functions.hpp"

using diffusia::gamma_pdf;
using diffusia::normal_quantile;
using diffusia::regularized_gamma_p;

TEST_CASE("regularized_gamma_p matches high-precision reference values") {
    // Frozen from a 30-digit mpmath evaluation of gammainc(a,0,x)/gamma(a).
    CHECK(regularized_gamma_p(2.0, 5.0) == doctest::Approx(0.959572318005487197).epsilon(1e-12));
    CHECK(regularized_gamma_p(0.5, 0.25) == doctest::Approx(0.520499877813046538).epsilon(1e-12));
    CHECK(regularized_gamma_p(3.0, 1.5) == doctest::Approx(0.191153169461941870).epsilon(1e-12));
    CHECK(regularized_gamma_p(2.5, 7.0) == doctest::Approx(0.984390583899733085).epsilon(1e-12));
    CHECK(regularized_gamma_p(1.0, 2.5) == doctest::Approx(0.917915001376101205).epsilon(1e-12));
}

TEST_CASE("regularized_gamma_p reduces to 1 - exp(-x) at shape 1") {
    for (double x : {0.01, 0.3, 1.0, 2.5, 9.0, 40.0}) {
        CHECK(regularized_gamma_p(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-13));
    }
}

TEST_CASE("regularized_gamma_p basics and domain") {
    CHECK(regularized_gamma_p(3.7, 0.0) == 0.0);
    CHECK(regularized_gamma_p(2.0, 1e4) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(regularized_gamma_p(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(regularized_gamma_p(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(regularized_gamma_p(1.0, -0.1), std::domain_error);

    double prev = -1.0;
    for (double x = 0.0; x <= 12.0; x += 0.25) {
        const double v = regularized_gamma_p(2.5, x);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("gamma_pdf is the derivative of the regularized CDF") {
    const double h = 1e-6;
    for (double a1 : {0.7, 1.0, 2.0, 3.5}) {
        for (double t : {0.5, 2.0, 10.0}) {
            const double a0 = 0.5;
            const double fd = (regularized_gamma_p(a1, a0 * (t + h)) -
                               regularized_gamma_p(a1, a0 * (t - h))) /
                              (2.0 * h);
            CHECK(gamma_pdf(t, a0, a1) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
    CHECK(gamma_pdf(10.0, 0.5, 2.0) == doctest::Approx(0.016844867497713668).epsilon(1e-13));
}

TEST_CASE("normal_quantile hits standard critical values and inverts the CDF") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-11));
    CHECK(normal_quantile(0.995) == doctest::Approx(2.575829303548901).epsilon(1e-11));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    for (double p : {0.001, 0.05, 0.21, 0.5, 0.77, 0.96, 0.9999}) {
        const double z = normal_quantile(p);
        CHECK(normal_quantile(1.0 - p) == doctest::Approx(-z).epsilon(1e-10));
        const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
        CHECK(cdf == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
}
