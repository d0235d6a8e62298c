#include "tvreg/tvar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tvreg/error.hpp"
#include "tvreg/linalg.hpp"

namespace tvreg {

std::vector<double> observation_grid(std::size_t T) {
    std::vector<double> grid(T);
    for (std::size_t t = 1; t <= T; ++t) grid[t - 1] = static_cast<double>(t) / static_cast<double>(T);
    return grid;
}

void check_tvar_sample(std::size_t T, std::size_t p) {
    if (p < 1) throw InvalidArgument("tvAR order must be at least 1");
    if (T < p || T - p < 2 * p + 1)
        throw InsufficientSample("tvAR(" + std::to_string(p) + ") needs T - p >= 2p + 1, got T = " +
                                 std::to_string(T));
}

LocalTvarProblem local_tvar_problem(std::span<const double> ehat, std::size_t p, double u, double h_e,
                                    const KernelSpec& kernel, std::size_t exclude) {
    if (!(h_e > 0.0)) throw NonPositiveBandwidth(h_e);
    const std::size_t T = ehat.size();
    const auto n = static_cast<Eigen::Index>(2 * p);
    const double dT = static_cast<double>(T);

    LocalTvarProblem problem;
    problem.gram = Eigen::MatrixXd::Zero(n, n);
    problem.cross = Eigen::VectorXd::Zero(n);

    // Observations outside |t/T - u| <= C h_e carry zero weight.
    const double reach = kernel.support() * h_e;
    const double first = std::max(static_cast<double>(p + 1), std::ceil((u - reach) * dT));
    const double last = std::min(dT, std::floor((u + reach) * dT));
    if (first > last) return problem;

    Eigen::VectorXd row(n);
    for (auto t = static_cast<std::size_t>(first); t <= static_cast<std::size_t>(last); ++t) {
        if (t == exclude) continue;
        const double offset = (static_cast<double>(t) / dT - u);
        const double w = eval_scaled(kernel, offset, h_e);
        if (w == 0.0) continue;
        const double scaled = offset / h_e;
        for (std::size_t k = 1; k <= p; ++k) {
            const double lag = ehat[t - k - 1];
            row[static_cast<Eigen::Index>(k - 1)] = lag;
            row[static_cast<Eigen::Index>(p + k - 1)] = lag * scaled;
        }
        const double response = ehat[t - 1];
        problem.gram.selfadjointView<Eigen::Lower>().rankUpdate(row, w);
        problem.cross.noalias() += (w * response) * row;
        problem.response_ss += w * response * response;
    }
    problem.gram.triangularView<Eigen::StrictlyUpper>() = problem.gram.transpose();
    return problem;
}

Eigen::VectorXd solve_local(const LocalTvarProblem& problem) {
    Eigen::VectorXd alpha;
    if (!linalg::solve_normal(problem.gram, problem.cross, alpha))
        throw SingularDesign("tvAR local normal matrix is singular");
    return alpha;
}

Eigen::VectorXd fit_at(std::span<const double> ehat, std::size_t p, double u, double h_e,
                       const KernelSpec& kernel) {
    check_tvar_sample(ehat.size(), p);
    return solve_local(local_tvar_problem(ehat, p, u, h_e, kernel));
}

TvarPath fit_path(std::span<const double> ehat, std::size_t p, double h_e, const KernelSpec& kernel,
                  std::optional<std::vector<double>> grid) {
    check_tvar_sample(ehat.size(), p);
    TvarPath path;
    path.p = p;
    path.bandwidth = h_e;
    path.grid = grid ? std::move(*grid) : observation_grid(ehat.size());
    const auto G = static_cast<Eigen::Index>(path.grid.size());
    const auto P = static_cast<Eigen::Index>(p);
    path.phi.resize(P, G);
    path.dphi_scaled.resize(P, G);
    for (Eigen::Index g = 0; g < G; ++g) {
        Eigen::VectorXd alpha;
        try {
            alpha = solve_local(local_tvar_problem(ehat, p, path.grid[g], h_e, kernel));
        } catch (const SingularDesign&) {
            throw SingularDesign("tvAR fit singular at grid point u = " + std::to_string(path.grid[g]),
                                 static_cast<std::size_t>(g + 1));
        }
        path.phi.col(g) = alpha.head(P);
        path.dphi_scaled.col(g) = alpha.tail(P);
    }
    return path;
}

}  // namespace tvreg
