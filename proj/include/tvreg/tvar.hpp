#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tvreg/kernels.hpp"

namespace tvreg {

/// Coefficient functions of a tvAR(p) process evaluated on a grid of
/// rescaled times. Row k-1 of `phi` holds phi_k; `dphi_scaled` holds
/// h_e * phi_k'.
struct TvarPath {
    std::size_t p = 0;
    std::vector<double> grid;
    Eigen::MatrixXd phi;
    Eigen::MatrixXd dphi_scaled;
    double bandwidth = 0.0;

    std::size_t size() const noexcept { return grid.size(); }
};

/// Observation grid {t/T : t = 1..T}.
std::vector<double> observation_grid(std::size_t T);

/// Sufficient statistics of the local loss
///   L(a) = c - 2 b'a + a'Ga
/// at one rescaled time u, over t = p+1..T with weights K_{h_e}(t/T - u).
/// The regressor row is (e_{t-1..t-p}, e_{t-1..t-p} * (t/T - u)/h_e).
struct LocalTvarProblem {
    Eigen::MatrixXd gram;
    Eigen::VectorXd cross;
    double response_ss = 0.0;

    double loss(const Eigen::VectorXd& alpha) const {
        return response_ss - 2.0 * cross.dot(alpha) + alpha.dot(gram * alpha);
    }
};

/// Builds the local problem at u. `exclude` (1-based, 0 = none) drops one
/// observation from the sum, which is how leave-one-out scores are formed.
LocalTvarProblem local_tvar_problem(std::span<const double> ehat, std::size_t p, double u, double h_e,
                                    const KernelSpec& kernel, std::size_t exclude = 0);

/// Unpenalized local-linear estimate alpha(u) = (phi(u), h_e phi'(u)).
/// Throws InsufficientSample when T - p < 2p + 1 and SingularDesign when the
/// local normal matrix cannot be inverted.
Eigen::VectorXd fit_at(std::span<const double> ehat, std::size_t p, double u, double h_e,
                       const KernelSpec& kernel);

/// Solves an already-assembled local problem; throws SingularDesign.
Eigen::VectorXd solve_local(const LocalTvarProblem& problem);

/// fit_at over a grid (default observation grid). SingularDesign carries the
/// 1-based grid index of the failing point.
TvarPath fit_path(std::span<const double> ehat, std::size_t p, double h_e, const KernelSpec& kernel,
                  std::optional<std::vector<double>> grid = std::nullopt);

void check_tvar_sample(std::size_t T, std::size_t p);

}  // namespace tvreg
