#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tvreg/kernels.hpp"
#include "tvreg/time_series.hpp"
#include "tvreg/tvar.hpp"

namespace tvreg {

/// Local-linear estimate at (u, x): g and its derivatives scaled by h.
struct SurfaceFit {
    double g = 0.0;
    double dg_du_scaled = 0.0;
    double dg_dx_scaled = 0.0;
    std::size_t effective_weight_count = 0;
    /// Bandwidth actually used; larger than requested only after widening.
    double bandwidth = 0.0;
};

/// What a local fit does when its window is too sparse to solve.
enum class SparseWindow {
    Fail,   ///< throw SingularDesign
    Widen,  ///< retry at this point with the bandwidth multiplied by widen_factor
};

/// Sparse-window handling. Under Widen a window also counts as sparse when
/// it holds fewer than `min_count` weighted observations.
struct WindowPolicy {
    SparseWindow mode = SparseWindow::Fail;
    double widen_factor = 1.25;
    int max_widen = 40;
    std::size_t min_count = 3;

    WindowPolicy() = default;
    WindowPolicy(SparseWindow m) : mode(m) {}  // NOLINT(google-explicit-constructor)
    WindowPolicy(SparseWindow m, std::size_t min) : mode(m), min_count(min) {}
};

/// Fitted values at the observation points and the matching residuals
/// ehat_t = Y_t - ghat(t/T, X_t).
struct ResidualSeries {
    std::vector<double> ehat;
    std::vector<double> ghat_at_obs;
};

/// Optional knobs for a single local fit.
/// `weights` multiplies the product-kernel weight of each observation (a zero
/// removes it); `response` replaces Y; only rows t >= sample_start enter.
/// The derivative components of a widened fit are scaled by the widened
/// bandwidth.
struct FitOptions {
    std::span<const double> weights{};
    std::span<const double> response{};
    std::size_t sample_start = 1;
    WindowPolicy window{};
};

/// Minimizer of sum_t {Y_t - a - b(t/T-u) - c(X_t-x)}^2 K_h(t/T-u) K_h(X_t-x).
/// Throws NonPositiveBandwidth, SingularDesign (fewer than three weighted
/// observations or an ill-conditioned 3x3 normal matrix) and InvalidArgument
/// for inconsistent overrides.
SurfaceFit fit_point(const TimeSeries& data, double u, double x, double h, const KernelSpec& kernel,
                     const FitOptions& options = {});

/// Step one: plain local-linear fit at every observation point.
ResidualSeries preliminary_fit(const TimeSeries& data, double h, const KernelSpec& kernel,
                               const WindowPolicy& window = {});

/// Whitened responses Y*_t = Y_t - sum_k phi_k(t/T) ehat_{t-k} for t > p0.
/// Entries t <= p0 are left equal to Y_t and never used by the refined fit.
/// Lags reaching before t = 1 are skipped.
std::vector<double> whiten(const TimeSeries& data, const ResidualSeries& prelim, const TvarPath& phi,
                           std::size_t p0);

/// Step three: local-linear fit of the whitened responses over t = p0+1..T,
/// evaluated at all T observation points. Throws LagExceedsSample if
/// p0 >= T - 3.
ResidualSeries refined_fit(const TimeSeries& data, const ResidualSeries& prelim, const TvarPath& phi,
                           std::size_t p0, double h_star, const KernelSpec& kernel,
                           const WindowPolicy& window = {});

/// Refined fit whitened with the true coefficient functions; lagged errors
/// still come from the preliminary residuals.
ResidualSeries oracle_fit(const TimeSeries& data, const ResidualSeries& prelim, const TvarPath& true_phi,
                          std::size_t p, double h_star, const KernelSpec& kernel,
                          const WindowPolicy& window = {});

/// Evaluates a fit on the rectangular grid us x xs (u-major order).
std::vector<SurfaceFit> fit_grid(const TimeSeries& data, std::span<const double> us,
                                 std::span<const double> xs, double h, const KernelSpec& kernel,
                                 const FitOptions& options = {});

}  // namespace tvreg
