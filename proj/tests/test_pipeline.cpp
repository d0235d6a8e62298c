#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "tvreg/pipeline.hpp"
#include "tvreg/simulate.hpp"

using namespace tvreg;

namespace {

PipelineOptions small_grid() {
    PipelineOptions o;
    o.lambda_grid = o.gamma_grid = {0.1, 1.0, 10.0, 100.0};
    return o;
}

}  // namespace

TEST_CASE("noise-free plane skips the error model") {
    const std::size_t T = 100;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-1, 1);
    std::vector<double> x(T), y(T);
    for (std::size_t t = 1; t <= T; ++t) {
        x[t - 1] = d(rng);
        y[t - 1] = 1.0 + 2.0 * static_cast<double>(t) / T - x[t - 1];
    }
    const PipelineResult r = run_pipeline(TimeSeries(x, y), small_grid());
    CHECK(r.structure.p0 == 0);
    REQUIRE(r.structure.selection);
    CHECK(r.structure.selection->s1.empty());
    CHECK(r.structure.path.phi.cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t t = 0; t < T; ++t) CHECK(std::abs(r.refined.ghat_at_obs[t] - y[t]) < 1e-6);
}

TEST_CASE("known order route") {
    SimulationConfig c;
    c.T = 150;
    c.model = model_b();
    const SimulatedDataset d = gen_dataset(c, 0);
    PipelineOptions o = small_grid();
    o.known_order = 2;
    o.h_star = 0.4;
    o.h_e = 0.3;
    const PipelineResult r = run_pipeline(d.series, o);
    CHECK(r.bandwidths.h_star == 0.4);
    CHECK(r.bandwidths.h == doctest::Approx(0.2));
    CHECK(r.bandwidths.h_e == 0.3);
    CHECK(r.structure.p0 == 2);
    CHECK(r.structure.path.p == 2);
    CHECK_FALSE(r.structure.selection);
    CHECK((r.structure.path.phi - fit_path(r.preliminary.ehat, 2, 0.3, epanechnikov).phi).cwiseAbs().maxCoeff() ==
          0.0);
    const auto w = whitened_response(d.series, r.preliminary, r.structure);
    CHECK(w == r.whitened);
    CHECK(r.refined.ghat_at_obs.size() == 150);
}

TEST_CASE("selection route reports a consistent structure") {
    SimulationConfig c;
    c.T = 200;
    const SimulatedDataset d = gen_dataset(c, 1);
    const PipelineResult r = run_pipeline(d.series, small_grid());
    REQUIRE(r.structure.selection);
    const auto& s = *r.structure.selection;
    CHECK(r.structure.p0 == (s.s1.empty() ? 0 : s.s1.back()));
    CHECK(std::includes(s.s1.begin(), s.s1.end(), s.s2.begin(), s.s2.end()));
    CHECK(r.structure.path.p == 5);
    CHECK(r.bandwidths.h == doctest::Approx(0.5 * r.bandwidths.h_star));
}

TEST_CASE("stage failures are labelled") {
    SimulationConfig c;
    c.T = 60;
    const SimulatedDataset d = gen_dataset(c, 0);
    PipelineOptions o = small_grid();
    o.window = SparseWindow::Fail;
    o.h_star_candidates = {1e-4};
    try {
        run_pipeline(d.series, o);
        FAIL("expected a failure");
    } catch (const PipelineError& e) {
        CHECK(e.stage() == "bandwidth");
    }
    o = small_grid();
    o.known_order = 58;
    o.h_star = 0.5;
    o.h_e = 0.3;
    try {
        run_pipeline(d.series, o);
        FAIL("expected a failure");
    } catch (const PipelineError& e) {
        CHECK(e.stage() == "tvar");
    }
}
