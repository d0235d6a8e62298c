#include "tvreg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace tvreg {

namespace {

double probe(const TimeSeries& data, double u, double x, double h, const KernelSpec& kernel,
             const FitOptions& options) {
    try {
        return fit_point(data, u, x, h, kernel, options).g;
    } catch (const SingularDesign&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

namespace {

void known_route(const SimulationConfig& config, const SimulatedDataset& sim, const PreliminaryStage& pre,
                 const PipelineOptions& options, ReplicationRecord& rec) {
    const TimeSeries& data = sim.series;
    const std::size_t p_true = config.model.true_order();
    StructureStage known;
    if (p_true > 0) {
        known = run_known_order(pre.fit.ehat, p_true, options);
    } else {
        known.path = zero_path(1, data.size(), 1.0);
    }
    rec.h_e = known.h_e;
    const ResidualSeries refined = run_refined(data, pre.fit, known, pre.h_star, options);
    rec.rase_refined = rase(refined.ghat_at_obs, sim.surface);

    StructureStage oracle = known;
    oracle.path = true_path(config.model, data.size());
    const ResidualSeries orc = run_refined(data, pre.fit, oracle, pre.h_star, options);
    rec.rase_oracle = rase(orc.ghat_at_obs, sim.surface);

    const std::vector<double> whitened = whitened_response(data, pre.fit, known);
    const FitOptions refined_options{.response = whitened, .sample_start = known.p0 + 1, .window = options.window};
    for (std::size_t i = 0; i < kProbePoints.size(); ++i) {
        const auto [u, x] = kProbePoints[i];
        rec.probe_refined[i] = probe(data, u, x, pre.h_star, options.kernel, refined_options);
    }
    rec.has_known = true;
}

void selection_route(const SimulationConfig& config, const SimulatedDataset& sim, const PreliminaryStage& pre,
                     const PipelineOptions& options, ReplicationRecord& rec) {
    const StructureStage selected = run_selection(pre.fit.ehat, options);
    const UlassoSolution& sol = *selected.selection;
    rec.h_e_selection = selected.h_e;
    rec.lambda = sol.lambda;
    rec.gamma = sol.gamma;
    rec.s1_hat = sol.s1;
    rec.s2_hat = sol.s2;
    rec.selection = classify(sol.s1, sol.s2, config.model.truth);
    for (std::size_t k = 1; k <= sol.path.p; ++k) rec.rase_phi.push_back(rase_phi(sol.path, config.model, k));
    if (const std::size_t c = constant_lag(config.model); c > 0) {
        try {
            rec.constant_estimate = constant_coefficient_estimate(sol, c);
        } catch (const NotIdentifiedConstant&) {
        }
    }
    const ResidualSeries refined = run_refined(sim.series, pre.fit, selected, pre.h_star, options);
    rec.rase_refined_selected = rase(refined.ghat_at_obs, sim.surface);
    rec.has_selection = true;
}

}  // namespace

ReplicationRecord run_replication(const SimulationConfig& config, std::size_t index,
                                  const PipelineOptions& options, Routes routes) {
    ReplicationRecord rec;
    rec.index = index;
    try {
        const SimulatedDataset sim = gen_dataset(config, index);
        if (sim.explosive) throw Error("simulated error process exceeded the explosive bound");
        const PreliminaryStage pre = run_preliminary(sim.series, options);
        rec.h_star = pre.h_star;
        rec.h = pre.h;
        rec.rase_preliminary = rase(pre.fit.ghat_at_obs, sim.surface);
        for (std::size_t i = 0; i < kProbePoints.size(); ++i) {
            const auto [u, x] = kProbePoints[i];
            rec.probe_preliminary[i] = probe(sim.series, u, x, pre.h, options.kernel, {.window = options.window});
        }
        if (routes.known) known_route(config, sim, pre, options, rec);
        if (routes.selection) selection_route(config, sim, pre, options, rec);
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.failure = e.what();
    }
    return rec;
}

ExperimentReport run_experiment(const SimulationConfig& config, const PipelineOptions& options,
                                std::size_t threads, Routes routes) {
    config.validate();
    const std::size_t n = config.replications;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);

    std::vector<ReplicationRecord> records(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) records[i] = run_replication(config, i, options, routes);
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
    }
    return aggregate(std::move(records), config.model, config.sigma, config.T);
}

}  // namespace tvreg
