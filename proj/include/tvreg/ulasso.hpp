#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tvreg/kernels.hpp"
#include "tvreg/tvar.hpp"

namespace tvreg {

/// 1-based, strictly increasing lag indices.
using IndexSet = std::vector<std::size_t>;

/// Sum-of-absolute-values threshold (per grid point) for set membership.
inline constexpr double kZeroThreshold = 1e-8;

/// True structure of a tvAR error: nonzero lags S1 and time-varying lags S2.
struct StructureTruth {
    IndexSet s1;
    IndexSet s2;
};

/// Uniform adaptive weights built from an unpenalized pilot path:
/// w_k = RMS of phi_k, w'_k = RMS of phi_k' over the grid.
struct AdaptiveWeights {
    std::vector<double> w;
    std::vector<double> w_prime;
    std::vector<bool> w_zero;
    std::vector<bool> w_prime_zero;
    TvarPath pilot;

    bool any_zero() const;
};

AdaptiveWeights adaptive_weights(const TvarPath& pilot);

/// Per-coordinate L1 levels for Q = L + sum_j level_j |alpha_j|.
/// Coordinates with a zero weight under a positive penalty get +inf (pinned to 0).
Eigen::VectorXd penalty_levels(const AdaptiveWeights& weights, double lambda, double gamma, double h_e);

struct DescentOptions {
    double tolerance = 1e-9;
    int max_sweeps = 10000;
    /// When non-null, receives Q after the start point and after every sweep.
    std::vector<double>* objective_trace = nullptr;
};

struct PenalizedFit {
    Eigen::VectorXd alpha;
    int sweeps = 0;
    bool converged = true;
};

/// Q(alpha) for one local problem.
double penalized_objective(const LocalTvarProblem& problem, const Eigen::VectorXd& levels,
                           const Eigen::VectorXd& alpha);

/// Cyclic coordinate descent with exact soft-threshold updates, started at
/// `start` (pinned coordinates are zeroed first). All-zero levels fall back to
/// the direct normal-equation solve.
PenalizedFit coordinate_descent(const LocalTvarProblem& problem, const Eigen::VectorXd& levels,
                                const Eigen::VectorXd& start, const DescentOptions& options = {});

/// Penalized estimate at a single u, started from the unpenalized solution.
PenalizedFit fit_penalized_at(std::span<const double> ehat, std::size_t p, double u, double h_e,
                              const KernelSpec& kernel, double lambda, double gamma,
                              const AdaptiveWeights& weights, const DescentOptions& options = {});

struct UlassoSolution {
    double lambda = 0.0;
    double gamma = 0.0;
    TvarPath path;
    IndexSet s1;
    IndexSet s2;
    std::size_t df = 0;
    double rss = 0.0;
    double bic = 0.0;
    /// Grid points where coordinate descent hit the sweep limit.
    std::size_t nonconverged = 0;
};

double bic_value(double rss, std::size_t df, std::size_t T, double h_e);

/// Caches the local problems on the observation grid so that many (lambda,
/// gamma) pairs can be solved against the same residual series.
class UlassoPathSolver {
public:
    UlassoPathSolver(std::span<const double> ehat, std::size_t p, double h_e, const KernelSpec& kernel,
                     AdaptiveWeights weights);

    UlassoSolution solve(double lambda, double gamma, const DescentOptions& options = {}) const;

    const AdaptiveWeights& weights() const noexcept { return weights_; }
    std::size_t order() const noexcept { return p_; }

private:
    std::size_t T_;
    std::size_t p_;
    double h_e_;
    AdaptiveWeights weights_;
    std::vector<LocalTvarProblem> problems_;
    std::vector<Eigen::VectorXd> unpenalized_;
};

/// Weights from an unpenalized pilot on the same residuals, then the path.
UlassoSolution fit_penalized_path(std::span<const double> ehat, std::size_t p, double h_e,
                                  const KernelSpec& kernel, double lambda, double gamma,
                                  const AdaptiveWeights& weights);

/// Minimizes BIC over the product grid. Ties go to the larger lambda, then
/// the larger gamma. Throws AllFitsFailed when no cell yields a usable BIC.
UlassoSolution select_tuning(std::span<const double> ehat, std::size_t p, double h_e, const KernelSpec& kernel,
                             std::span<const double> grid_lambda, std::span<const double> grid_gamma);

/// Same search restricted to lambda = gamma.
UlassoSolution select_tuning_shared(std::span<const double> ehat, std::size_t p, double h_e,
                                    const KernelSpec& kernel, std::span<const double> grid);

/// `count` log-spaced values on [1e-2, 1e2] * T^{1/5} (log T)^{1/2}.
std::vector<double> default_tuning_grid(std::size_t T, std::size_t count = 25);

/// Mean of phi_k over the grid; only defined for k in S1 \ S2.
double constant_coefficient_estimate(const UlassoSolution& solution, std::size_t k);

}  // namespace tvreg
