#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tvreg/bandwidth.hpp"
#include "tvreg/error.hpp"
#include "tvreg/kernels.hpp"
#include "tvreg/locallinear.hpp"
#include "tvreg/time_series.hpp"
#include "tvreg/tvar.hpp"
#include "tvreg/ulasso.hpp"

namespace tvreg {

/// Settings of the three-step estimator. Empty candidate or tuning grids
/// fall back to the T-dependent defaults.
struct PipelineOptions {
    KernelSpec kernel = epanechnikov;
    /// Sparse-window policy of every surface fit (bandwidth selection,
    /// preliminary and refined steps).
    WindowPolicy window{SparseWindow::Widen, 6};

    std::optional<double> h_star;
    /// Tail fraction of X left out of the bandwidth score on each side.
    double cv_trim = 0.025;
    std::optional<double> h_e;
    std::vector<double> h_star_candidates;
    std::vector<double> h_e_candidates;
    double factor = 0.5;

    /// When set, step two is the unpenalized tvAR(p) fit with this order.
    std::optional<std::size_t> known_order;
    /// Order searched by the ULASSO selection otherwise.
    std::size_t max_order = 5;
    std::vector<double> lambda_grid;
    std::vector<double> gamma_grid;
    bool shared_tuning = false;
};

/// Failure inside one stage of the procedure; `stage` is one of
/// "bandwidth", "preliminary", "tvar", "selection", "refined".
class PipelineError : public Error {
public:
    PipelineError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

struct PreliminaryStage {
    double h_star = 0.0;
    double h = 0.0;
    ResidualSeries fit;
};

struct StructureStage {
    double h_e = 0.0;
    TvarPath path;
    std::size_t p0 = 0;
    std::optional<UlassoSolution> selection;
};

struct PipelineResult {
    BandwidthSet bandwidths;
    ResidualSeries preliminary;
    StructureStage structure;
    std::vector<double> whitened;
    ResidualSeries refined;
};

PreliminaryStage run_preliminary(const TimeSeries& data, const PipelineOptions& options);

/// Unpenalized tvAR(p) on the preliminary residuals; p0 = p.
StructureStage run_known_order(const std::vector<double>& ehat, std::size_t p, const PipelineOptions& options);

/// ULASSO with BIC tuning over lags 1..max_order; p0 = max(S1hat) or 0.
StructureStage run_selection(const std::vector<double>& ehat, const PipelineOptions& options);

/// Whitened responses for a structure stage result.
std::vector<double> whitened_response(const TimeSeries& data, const ResidualSeries& prelim,
                                      const StructureStage& structure);

ResidualSeries run_refined(const TimeSeries& data, const ResidualSeries& prelim, const StructureStage& structure,
                           double h_star, const PipelineOptions& options);

/// All three steps; errors surface as PipelineError. When the preliminary
/// residuals vanish to rounding (max |ehat| <= kNegligibleResidual * max(1,
/// max |Y|)), step two is skipped: the structure is empty (zero path, p0 = 0,
/// S1 = S2 = {}) and the refined step smooths Y itself at h_star.
PipelineResult run_pipeline(const TimeSeries& data, const PipelineOptions& options);

inline constexpr double kNegligibleResidual = 1e-10;

/// Path identically zero on the observation grid.
TvarPath zero_path(std::size_t p, std::size_t T, double h_e);

}  // namespace tvreg
