#include <cmath>
#include <random>

#include <doctest.h>

#include "oracle.hpp"
#include "tvreg/error.hpp"
#include "tvreg/kernels.hpp"

using namespace tvreg;

TEST_CASE("kernel values") {
    CHECK(eval(epanechnikov, 0.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(eval(epanechnikov, 1.0) == 0.0);
    CHECK(eval(epanechnikov, -1.0) == 0.0);
    CHECK(eval(epanechnikov, 0.5) == doctest::Approx(0.5625).epsilon(1e-15));
    CHECK(eval(epanechnikov, 1.7) == 0.0);
}

TEST_CASE("scaled kernel") {
    CHECK(eval_scaled(epanechnikov, 0.0, 0.5) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(eval_scaled(epanechnikov, 0.6, 0.5) == 0.0);
    CHECK(eval_scaled(epanechnikov, 0.1, 0.2) == doctest::Approx(2.8125).epsilon(1e-14));
    CHECK_THROWS_AS(eval_scaled(epanechnikov, 0.1, 0.0), NonPositiveBandwidth);
    CHECK_THROWS_AS(eval_scaled(epanechnikov, 0.1, -1.0), NonPositiveBandwidth);
}

TEST_CASE("moments match closed-form integrals") {
    // Polynomial integrals of 0.75(1 - t^2) and its square on [-1, 1].
    const double mu2 = 0.75 * (2.0 / 3.0 - 2.0 / 5.0);
    const double nu0 = 0.5625 * (2.0 - 4.0 / 3.0 + 2.0 / 5.0);
    const double nu2 = 0.5625 * (2.0 / 3.0 - 4.0 / 5.0 + 2.0 / 7.0);
    const KernelMoments m = moments(epanechnikov);
    CHECK(m.mu2 == doctest::Approx(mu2).epsilon(1e-12));
    CHECK(m.mu2 == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(m.nu0 == doctest::Approx(nu0).epsilon(1e-12));
    CHECK(m.nu0 == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(std::abs(m.nu1) < 1e-14);
    CHECK(m.nu2 == doctest::Approx(nu2).epsilon(1e-12));
    CHECK(m.nu2 == doctest::Approx(3.0 / 35.0).epsilon(1e-12));
}

TEST_CASE("kernel symmetry and agreement with reference") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    for (int i = 0; i < 1000; ++i) {
        const double x = d(rng);
        CHECK(eval(epanechnikov, x) == eval(epanechnikov, -x));
        CHECK(eval(epanechnikov, x) == doctest::Approx(oracle::epan(x)).epsilon(1e-15));
    }
}

TEST_CASE("kernel normalization") {
    CHECK(std::abs(integrate([](double x) { return eval(epanechnikov, x); }, -1.0, 1.0) - 1.0) < 1e-10);
    for (double h : {0.05, 0.3, 2.0}) {
        const double area = integrate([h](double x) { return eval_scaled(epanechnikov, x, h); }, -h, h);
        CHECK(std::abs(area - 1.0) < 1e-10);
    }
}
