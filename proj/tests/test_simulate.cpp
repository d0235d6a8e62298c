#include <cmath>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "tvreg/error.hpp"
#include "tvreg/rng.hpp"
#include "tvreg/simulate.hpp"

using namespace tvreg;

namespace {

CoefficientModel frozen(double phi) {
    CoefficientModel m;
    m.phi = {[phi](double) { return phi; }};
    if (phi != 0.0) m.truth.s1 = {1};
    return m;
}

double sample_sd(const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_CASE("simulation is deterministic in the seed") {
    SimulationConfig c;
    c.T = 100;
    c.seed = 42;
    const SimulatedDataset a = gen_dataset(c, 3);
    const SimulatedDataset b = gen_dataset(c, 3);
    CHECK(a.series.x() == b.series.x());
    CHECK(a.series.y() == b.series.y());
    const SimulatedDataset other = gen_dataset(c, 4);
    CHECK(a.series.y() != other.series.y());
    CHECK(derive_seed(42, 3, 0) != derive_seed(42, 3, 1));
    NormalStream s1(5), s2(5);
    for (int i = 0; i < 10; ++i) CHECK(s1.normal() == s2.normal());
}

TEST_CASE("regressor recursion") {
    CHECK(gen_regressor_from_innovations(std::vector<double>(20, 0.0)) == std::vector<double>(20, 0.0));
    const auto x = gen_regressor_from_innovations(std::vector<double>{1.0, 0.0, 0.0, 0.0});
    CHECK(x[0] == doctest::Approx(0.5));
    CHECK(x[1] == doctest::Approx(0.7 * 0.5 * 0.5));
    std::vector<double> tail;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) tail.push_back(gen_regressor(500, seed).back());
    CHECK(sample_sd(tail) == doctest::Approx(0.5 / std::sqrt(1.0 - 0.49)).epsilon(0.03));
}

TEST_CASE("error recursion") {
    const std::size_t T = 60, burn = 10;
    std::vector<double> z(T + burn);
    NormalStream rng(1);
    for (double& v : z) v = rng.normal();
    const ErrorDraw white = gen_error_from_innovations(T, frozen(0.0), 0.7, z, burn);
    for (std::size_t t = 0; t < T; ++t) CHECK(white.e[t] == 0.7 * z[burn + t]);

    const ErrorDraw tiny = gen_error_from_innovations(T, model_a(), 1e-300, z, burn);
    for (double v : tiny.e) CHECK(std::abs(v) < 1e-290);

    const ErrorDraw one = gen_error_from_innovations(T, model_b(), 1.0, z, burn);
    const ErrorDraw two = gen_error_from_innovations(T, model_b(), 2.0, z, burn);
    for (std::size_t t = 0; t < T; ++t) CHECK(two.e[t] == doctest::Approx(2.0 * one.e[t]).epsilon(1e-12));

    CHECK_THROWS_AS(gen_error_from_innovations(T, model_a(), 1.0, std::vector<double>(T), burn), InvalidArgument);
}

TEST_CASE("frozen coefficient gives the AR(1) autocorrelation") {
    const double phi = model_a().phi[0](0.25);
    CHECK(phi == doctest::Approx(0.5).epsilon(1e-12));
    const std::size_t T = 100000;
    const auto e = gen_error(T, frozen(phi), 1.0, 17, 200).e;
    const double mean = std::accumulate(e.begin(), e.end(), 0.0) / T;
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        den += (e[t] - mean) * (e[t] - mean);
        if (t > 0) num += (e[t] - mean) * (e[t - 1] - mean);
    }
    CHECK(std::abs(num / den - 0.5) < 0.02);
}

TEST_CASE("model definitions") {
    CHECK(true_surface(0.5, 1.0) == doctest::Approx(-1.5).epsilon(1e-14));
    CHECK(true_surface(0.0, 2.0) == doctest::Approx(6.0).epsilon(1e-14));
    const auto a = model_a(), b = model_b(), c = model_c();
    CHECK(a.order() == 5);
    CHECK(a.truth.s1 == IndexSet{1});
    CHECK(a.truth.s2 == IndexSet{1});
    CHECK(b.truth.s1 == IndexSet{1, 2});
    CHECK(b.truth.s2 == IndexSet{1});
    CHECK(c.truth.s1 == IndexSet{1, 2});
    CHECK(c.truth.s2 == IndexSet{1, 2});
    CHECK(b.phi[1](0.9) == 0.3);
    CHECK(b.phi[0](0.4) == doctest::Approx(-0.6));
    CHECK(c.phi[1](0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.true_order() == 2);
    CHECK(model_by_name("B").label == ModelLabel::B);
    CHECK_THROWS_AS(model_by_name("d"), InvalidArgument);
    CHECK(model_name(ModelLabel::C) == "c");
    const TvarPath p = true_path(b, 100);
    CHECK(p.phi(1, 50) == 0.3);
    CHECK(p.dphi_scaled(1, 50) == 0.0);
}

TEST_CASE("simulated errors stay bounded") {
    for (const auto& model : {model_a(), model_b(), model_c()}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const ErrorDraw d = gen_error(2000, model, 1.0, seed, 200);
            CHECK_FALSE(d.explosive);
        }
    }
}

TEST_CASE("dataset assembly") {
    SimulationConfig c;
    c.T = 80;
    c.model = model_c();
    const SimulatedDataset d = gen_dataset(c, 0);
    for (std::size_t t = 1; t <= 80; ++t) {
        CHECK(d.surface[t - 1] == true_surface(t / 80.0, d.series.x()[t - 1]));
        CHECK(d.series.y()[t - 1] == d.surface[t - 1] + d.errors[t - 1]);
    }
    c.T = 10;
    CHECK_THROWS_AS(gen_dataset(c, 0), InvalidArgument);
    c.T = 80;
    c.sigma = 0.0;
    CHECK_THROWS_AS(gen_dataset(c, 0), InvalidArgument);
}
