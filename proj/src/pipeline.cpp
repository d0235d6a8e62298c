#include "tvreg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tvreg {

namespace {

template <typename F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError(stage, e.what());
    }
}

}  // namespace

TvarPath zero_path(std::size_t p, std::size_t T, double h_e) {
    TvarPath path;
    path.p = p;
    path.bandwidth = h_e;
    path.grid = observation_grid(T);
    path.phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(T));
    path.dphi_scaled = path.phi;
    return path;
}

namespace {

double tvar_bandwidth(const std::vector<double>& ehat, std::size_t p, const PipelineOptions& options) {
    return staged("bandwidth", [&] {
        if (options.h_e) return *options.h_e;
        const auto candidates =
            options.h_e_candidates.empty() ? default_tvar_candidates(ehat.size()) : options.h_e_candidates;
        return loocv_tvar(ehat, p, candidates, options.kernel);
    });
}

}  // namespace

PreliminaryStage run_preliminary(const TimeSeries& data, const PipelineOptions& options) {
    PreliminaryStage stage;
    stage.h_star = staged("bandwidth", [&] {
        if (options.h_star) return *options.h_star;
        const auto candidates = options.h_star_candidates.empty() ? default_surface_candidates(data.size())
                                                                   : options.h_star_candidates;
        return loocv_surface(data, candidates, options.kernel, {.window = options.window}, options.cv_trim);
    });
    stage.h = staged("bandwidth", [&] { return derive_set(stage.h_star, 1.0, options.factor).h; });
    stage.fit = staged("preliminary", [&] { return preliminary_fit(data, stage.h, options.kernel, options.window); });
    return stage;
}

StructureStage run_known_order(const std::vector<double>& ehat, std::size_t p, const PipelineOptions& options) {
    StructureStage stage;
    stage.h_e = tvar_bandwidth(ehat, p, options);
    stage.path = staged("tvar", [&] { return fit_path(ehat, p, stage.h_e, options.kernel); });
    stage.p0 = p;
    return stage;
}

StructureStage run_selection(const std::vector<double>& ehat, const PipelineOptions& options) {
    StructureStage stage;
    const std::size_t p = options.max_order;
    stage.h_e = tvar_bandwidth(ehat, p, options);
    stage.selection = staged("selection", [&] {
        const auto lambda = options.lambda_grid.empty() ? default_tuning_grid(ehat.size()) : options.lambda_grid;
        if (options.shared_tuning) return select_tuning_shared(ehat, p, stage.h_e, options.kernel, lambda);
        const auto gamma = options.gamma_grid.empty() ? default_tuning_grid(ehat.size()) : options.gamma_grid;
        return select_tuning(ehat, p, stage.h_e, options.kernel, lambda, gamma);
    });
    stage.path = stage.selection->path;
    stage.p0 = stage.selection->s1.empty() ? 0 : stage.selection->s1.back();
    return stage;
}

std::vector<double> whitened_response(const TimeSeries& data, const ResidualSeries& prelim,
                                      const StructureStage& structure) {
    return whiten(data, prelim, structure.path, structure.p0);
}

ResidualSeries run_refined(const TimeSeries& data, const ResidualSeries& prelim, const StructureStage& structure,
                           double h_star, const PipelineOptions& options) {
    return staged("refined", [&] {
        return refined_fit(data, prelim, structure.path, structure.p0, h_star, options.kernel, options.window);
    });
}

PipelineResult run_pipeline(const TimeSeries& data, const PipelineOptions& options) {
    PipelineResult result;
    PreliminaryStage pre = run_preliminary(data, options);
    result.preliminary = pre.fit;

    double y_scale = 1.0, e_max = 0.0;
    for (double y : data.y()) y_scale = std::max(y_scale, std::abs(y));
    for (double e : pre.fit.ehat) e_max = std::max(e_max, std::abs(e));
    if (e_max <= kNegligibleResidual * y_scale) {
        const std::size_t p = options.known_order.value_or(options.max_order);
        result.structure.h_e = options.h_e.value_or(1.0);
        result.structure.path = zero_path(p, data.size(), result.structure.h_e);
        if (!options.known_order) {
            UlassoSolution empty;
            empty.path = result.structure.path;
            empty.bic = -std::numeric_limits<double>::infinity();
            result.structure.selection = empty;
        }
        result.bandwidths = {pre.h, result.structure.h_e, pre.h_star};
        result.whitened = data.y();
        result.refined = run_refined(data, pre.fit, result.structure, pre.h_star, options);
        return result;
    }

    result.structure = options.known_order ? run_known_order(pre.fit.ehat, *options.known_order, options)
                                           : run_selection(pre.fit.ehat, options);
    result.bandwidths = {pre.h, result.structure.h_e, pre.h_star};
    result.whitened = whitened_response(data, pre.fit, result.structure);
    result.refined = run_refined(data, pre.fit, result.structure, pre.h_star, options);
    return result;
}

}  // namespace tvreg
