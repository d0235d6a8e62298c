#include <cmath>
#include <vector>

#include <doctest.h>

#include "oracle.hpp"
#include "tvreg/error.hpp"
#include "tvreg/rng.hpp"
#include "tvreg/tvar.hpp"

using namespace tvreg;

namespace {

std::vector<double> ar1(std::size_t T, double phi, std::uint64_t seed) {
    NormalStream z(seed);
    std::vector<double> e(T);
    double prev = 0.0;
    for (std::size_t b = 0; b < 100; ++b) prev = phi * prev + z.normal();
    for (auto& v : e) prev = v = phi * prev + z.normal();
    return e;
}

}  // namespace

TEST_CASE("noise-free AR(1) is recovered") {
    std::vector<double> e(40);
    e[0] = 1.0;
    for (std::size_t t = 1; t < e.size(); ++t) e[t] = 0.6 * e[t - 1];
    const Eigen::VectorXd a = fit_at(e, 1, 0.5, 0.4, epanechnikov);
    CHECK(std::abs(a[0] - 0.6) < 1e-8);
    CHECK(std::abs(a[1]) < 1e-8);
}

TEST_CASE("all-zero residuals are singular") {
    const std::vector<double> e(30, 0.0);
    CHECK_THROWS_AS(fit_at(e, 1, 0.5, 0.4, epanechnikov), SingularDesign);
}

TEST_CASE("local tvAR fit matches the dense oracle") {
    const auto e = ar1(15, 0.4, 3);
    const std::vector<double> ev(e.begin(), e.end());
    const Eigen::VectorXd a = fit_at(e, 2, 0.5, 0.3, epanechnikov);
    const auto ref = oracle::tvar(ev, 2, 0.5, 0.3);
    REQUIRE(a.size() == 4);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(a[j] - ref[static_cast<std::size_t>(j)]) < 1e-10 * std::max(1.0, std::abs(ref[static_cast<std::size_t>(j)])));
}

TEST_CASE("local problem reproduces the weighted loss") {
    const auto e = ar1(50, 0.5, 4);
    const LocalTvarProblem prob = local_tvar_problem(e, 2, 0.3, 0.25, epanechnikov);
    Eigen::VectorXd alpha(4);
    alpha << 0.3, -0.1, 0.05, 0.2;
    double direct = 0.0;
    for (std::size_t t = 3; t <= 50; ++t) {
        const double du = static_cast<double>(t) / 50.0 - 0.3;
        const double w = oracle::epan_h(du, 0.25);
        double pred = 0.0;
        for (std::size_t k = 1; k <= 2; ++k)
            pred += e[t - 1 - k] * (alpha[static_cast<Eigen::Index>(k - 1)] +
                                    alpha[static_cast<Eigen::Index>(k + 1)] * du / 0.25);
        direct += w * (e[t - 1] - pred) * (e[t - 1] - pred);
    }
    CHECK(prob.loss(alpha) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("coefficients are scale invariant") {
    const auto e = ar1(80, 0.5, 5);
    std::vector<double> scaled(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) scaled[i] = 7.5 * e[i];
    const Eigen::VectorXd a = fit_at(e, 2, 0.4, 0.3, epanechnikov);
    const Eigen::VectorXd b = fit_at(scaled, 2, 0.4, 0.3, epanechnikov);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("path on a custom grid") {
    const auto e = ar1(60, 0.5, 6);
    const TvarPath one = fit_path(e, 1, 0.3, epanechnikov, std::vector<double>{0.5});
    REQUIRE(one.size() == 1);
    CHECK(one.phi(0, 0) == fit_at(e, 1, 0.5, 0.3, epanechnikov)[0]);
    const TvarPath full = fit_path(e, 2, 0.3, epanechnikov);
    CHECK(full.size() == 60);
    CHECK(full.grid.back() == 1.0);
    CHECK(full.phi.rows() == 2);
}

TEST_CASE("constant coefficient is estimated uniformly well") {
    const auto e = ar1(2000, 0.5, 7);
    const TvarPath path = fit_path(e, 1, 0.3, epanechnikov);
    CHECK((path.phi.row(0).array() - 0.5).abs().maxCoeff() < 0.1);
}

TEST_CASE("sample size checks") {
    const std::vector<double> e{0.1, -0.2, 0.3, 0.1, 0.5, -0.4};
    CHECK_THROWS_AS(fit_at(e, 3, 0.5, 0.5, epanechnikov), InsufficientSample);
    CHECK_THROWS_AS(fit_at(e, 1, 0.5, 0.0, epanechnikov), NonPositiveBandwidth);
    CHECK(observation_grid(4) == std::vector<double>{0.25, 0.5, 0.75, 1.0});
}
