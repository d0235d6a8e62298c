#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "tvreg/error.hpp"
#include "tvreg/experiment.hpp"
#include "tvreg/metrics.hpp"

using namespace tvreg;

namespace {

ReplicationRecord record(std::size_t index, double pre, double ref, Fit vs) {
    ReplicationRecord r;
    r.index = index;
    r.ok = true;
    r.has_known = true;
    r.has_selection = true;
    r.rase_preliminary = pre;
    r.rase_refined = ref;
    r.rase_oracle = ref;
    r.rase_refined_selected = ref;
    r.selection = {vs, vs};
    r.rase_phi = {pre, ref};
    return r;
}

}  // namespace

TEST_CASE("rase") {
    const std::vector<double> a{1, 2, 3}, b{1, 1, 1};
    CHECK(rase(a, b) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
    CHECK(rase(a, b) == rase(b, a));
    std::vector<double> shifted = a;
    for (double& v : shifted) v += 0.25;
    CHECK(rase(shifted, a) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(rase(a, a) == 0.0);
    CHECK_THROWS_AS(rase(a, std::vector<double>{1, 2}), LengthMismatch);
}

TEST_CASE("selection classification") {
    const StructureTruth truth{{1, 2}, {1}};
    CHECK(classify({1, 2}, {1}, truth).vs == Fit::Correct);
    CHECK(classify({1, 2}, {1}, truth).vs_ci == Fit::Correct);
    CHECK(classify({1}, {1}, truth).vs == Fit::Underfitted);
    CHECK(classify({1, 2, 4}, {1}, truth).vs == Fit::Overfitted);
    CHECK(classify({1, 2, 4}, {1}, truth).vs_ci == Fit::Overfitted);
    CHECK(classify({1, 2}, {1, 2}, truth).vs == Fit::Correct);
    CHECK(classify({1, 2}, {1, 2}, truth).vs_ci == Fit::Overfitted);
    CHECK(classify({1, 2}, {}, truth).vs_ci == Fit::Underfitted);
    // Missing a time-varying lag while adding a spurious one counts as under.
    CHECK(classify({1, 2, 3}, {3}, truth).vs_ci == Fit::Underfitted);
    CHECK(to_string(Fit::Overfitted) == "over");
}

TEST_CASE("summaries") {
    const Summary s = summarize(std::vector<double>{0.1, 0.3});
    CHECK(s.mean == doctest::Approx(0.2));
    CHECK(s.sd == doctest::Approx(0.1414213562).epsilon(1e-9));
    CHECK(s.sd_defined);
    const Summary one = summarize(std::vector<double>{0.5});
    CHECK_FALSE(one.sd_defined);
    CHECK(one.sd == 0.0);
    const auto [skew, kurt] = skewness_kurtosis(std::vector<double>{-1, 0, 1});
    CHECK(skew == doctest::Approx(0.0));
    CHECK(kurt == doctest::Approx(-1.5));
}

TEST_CASE("aggregation") {
    const CoefficientModel model = model_b();
    std::vector<ReplicationRecord> records{record(0, 0.3, 0.2, Fit::Correct), record(1, 0.5, 0.1, Fit::Overfitted),
                                           record(2, 0.4, 0.3, Fit::Correct), record(3, 0.2, 0.2, Fit::Underfitted)};
    records[0].constant_estimate = 0.35;
    records[2].constant_estimate = 0.25;
    ReplicationRecord failed;
    failed.index = 4;
    failed.failure = "tvar: singular";
    records.push_back(failed);

    const ExperimentReport r = aggregate(records, model, 0.5, 100);
    CHECK(r.replications == 5);
    CHECK(r.failures == 1);
    CHECK(r.preliminary.mean == doctest::Approx(0.35));
    CHECK(r.refined.count == 4);
    CHECK(r.vs[0] + r.vs[1] + r.vs[2] == doctest::Approx(1.0));
    CHECK(r.vs[1] == doctest::Approx(0.5));
    CHECK(r.constant_lag == 2);
    CHECK(r.constant_count == 2);
    CHECK(std::abs(r.constant_bias) < 1e-12);
    CHECK(r.constant_se == doctest::Approx(std::sqrt(0.005)));
    REQUIRE(r.phi.size() == 2);

    std::mt19937_64 rng(3);
    std::shuffle(records.begin(), records.end(), rng);
    const ExperimentReport s = aggregate(records, model, 0.5, 100);
    CHECK(s.preliminary.mean == r.preliminary.mean);
    CHECK(s.refined.sd == r.refined.sd);
    CHECK(s.constant_se == r.constant_se);
    CHECK(s.records.front().index == 0);

    CHECK_THROWS_AS(aggregate({}, model, 0.5, 100), EmptyRecords);
}

TEST_CASE("routes restrict what is aggregated") {
    std::vector<ReplicationRecord> records{record(0, 0.3, 0.2, Fit::Correct), record(1, 0.5, 0.1, Fit::Correct)};
    records[1].has_selection = false;
    records[1].selection = {Fit::Underfitted, Fit::Underfitted};
    const ExperimentReport r = aggregate(records, model_a(), 0.5, 100);
    CHECK(r.refined.count == 2);
    CHECK(r.refined_selected.count == 1);
    CHECK(r.vs[1] == 1.0);
}

TEST_CASE("experiment results do not depend on the worker count") {
    SimulationConfig c;
    c.T = 60;
    c.replications = 6;
    c.seed = 9;
    PipelineOptions o;
    o.lambda_grid = o.gamma_grid = {0.1, 1.0, 10.0};
    const ExperimentReport one = run_experiment(c, o, 1);
    const ExperimentReport four = run_experiment(c, o, 4);
    REQUIRE(one.records.size() == four.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i) {
        const auto& a = one.records[i];
        const auto& b = four.records[i];
        CHECK(a.ok == b.ok);
        CHECK(a.rase_preliminary == b.rase_preliminary);
        CHECK(a.rase_refined == b.rase_refined);
        CHECK(a.rase_oracle == b.rase_oracle);
        CHECK(a.rase_refined_selected == b.rase_refined_selected);
        CHECK(a.s1_hat == b.s1_hat);
        CHECK(a.lambda == b.lambda);
        CHECK(a.rase_phi == b.rase_phi);
    }
    CHECK(one.refined.mean == four.refined.mean);
    CHECK(one.vs == four.vs);

    const ReplicationRecord known = run_replication(c, 2, o, {.known = true, .selection = false});
    CHECK(known.has_known);
    CHECK_FALSE(known.has_selection);
    CHECK(known.rase_refined == one.records[2].rase_refined);
}
