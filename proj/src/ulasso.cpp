#include "tvreg/ulasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tvreg/error.hpp"
#include "tvreg/linalg.hpp"

namespace tvreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rms_row(const Eigen::MatrixXd& m, Eigen::Index row, double scale) {
    if (m.cols() == 0) return 0.0;
    return std::sqrt(m.row(row).squaredNorm() / static_cast<double>(m.cols())) * scale;
}

double soft_threshold(double z, double level) {
    if (z > level) return z - level;
    if (z < -level) return z + level;
    return 0.0;
}

void check_grid(std::span<const double> grid, const char* name) {
    if (grid.empty()) throw InvalidArgument(std::string(name) + " grid is empty");
    for (double v : grid)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InvalidArgument(std::string(name) + " grid values must be finite and nonnegative");
}

IndexSet nonzero_rows(const Eigen::MatrixXd& m) {
    IndexSet out;
    const double threshold = kZeroThreshold * static_cast<double>(m.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k)
        if (m.row(k).cwiseAbs().sum() > threshold) out.push_back(static_cast<std::size_t>(k + 1));
    return out;
}

}  // namespace

bool AdaptiveWeights::any_zero() const {
    return std::find(w_zero.begin(), w_zero.end(), true) != w_zero.end() ||
           std::find(w_prime_zero.begin(), w_prime_zero.end(), true) != w_prime_zero.end();
}

AdaptiveWeights adaptive_weights(const TvarPath& pilot) {
    AdaptiveWeights out;
    out.pilot = pilot;
    const auto P = static_cast<Eigen::Index>(pilot.p);
    for (Eigen::Index k = 0; k < P; ++k) {
        out.w.push_back(rms_row(pilot.phi, k, 1.0));
        out.w_prime.push_back(rms_row(pilot.dphi_scaled, k, 1.0 / pilot.bandwidth));
        out.w_zero.push_back(out.w.back() == 0.0);
        out.w_prime_zero.push_back(out.w_prime.back() == 0.0);
    }
    return out;
}

Eigen::VectorXd penalty_levels(const AdaptiveWeights& weights, double lambda, double gamma, double h_e) {
    const auto P = static_cast<Eigen::Index>(weights.w.size());
    Eigen::VectorXd levels(2 * P);
    for (Eigen::Index k = 0; k < P; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        levels[k] = lambda == 0.0 ? 0.0 : (weights.w_zero[ku] ? kInf : lambda / weights.w[ku]);
        // The solver works in h_e * phi'; |phi'| = |h_e phi'| / h_e.
        levels[P + k] =
            gamma == 0.0 ? 0.0 : (weights.w_prime_zero[ku] ? kInf : gamma / (h_e * weights.w_prime[ku]));
    }
    return levels;
}

double penalized_objective(const LocalTvarProblem& problem, const Eigen::VectorXd& levels,
                           const Eigen::VectorXd& alpha) {
    double penalty = 0.0;
    for (Eigen::Index j = 0; j < alpha.size(); ++j)
        if (alpha[j] != 0.0) penalty += levels[j] * std::abs(alpha[j]);
    return problem.loss(alpha) + penalty;
}

PenalizedFit coordinate_descent(const LocalTvarProblem& problem, const Eigen::VectorXd& levels,
                                const Eigen::VectorXd& start, const DescentOptions& options) {
    const Eigen::Index n = start.size();
    PenalizedFit fit;
    if ((levels.array() == 0.0).all()) {
        fit.alpha = solve_local(problem);
        if (options.objective_trace) options.objective_trace->push_back(problem.loss(fit.alpha));
        return fit;
    }

    const Eigen::MatrixXd& gram = problem.gram;
    Eigen::VectorXd alpha = start;
    for (Eigen::Index j = 0; j < n; ++j)
        if (std::isinf(levels[j]) || gram(j, j) <= 0.0) alpha[j] = 0.0;
    // Residual correlation r = b - G alpha, maintained incrementally.
    Eigen::VectorXd r = problem.cross - gram * alpha;
    if (options.objective_trace) options.objective_trace->push_back(penalized_objective(problem, levels, alpha));

    fit.converged = false;
    for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double gjj = gram(j, j);
            if (std::isinf(levels[j]) || gjj <= 0.0) continue;
            const double old = alpha[j];
            const double z = r[j] + gjj * old;
            const double updated = soft_threshold(z, 0.5 * levels[j]) / gjj;
            const double delta = updated - old;
            if (delta != 0.0) {
                alpha[j] = updated;
                r.noalias() -= delta * gram.col(j);
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        if (options.objective_trace)
            options.objective_trace->push_back(penalized_objective(problem, levels, alpha));
        fit.sweeps = sweep;
        if (max_change < options.tolerance) {
            fit.converged = true;
            break;
        }
    }
    fit.alpha = std::move(alpha);
    return fit;
}

PenalizedFit fit_penalized_at(std::span<const double> ehat, std::size_t p, double u, double h_e,
                              const KernelSpec& kernel, double lambda, double gamma,
                              const AdaptiveWeights& weights, const DescentOptions& options) {
    if (!(lambda >= 0.0) || !(gamma >= 0.0)) throw InvalidArgument("tuning parameters must be nonnegative");
    if (weights.w.size() != p) throw InvalidArgument("adaptive weights do not match the tvAR order");
    check_tvar_sample(ehat.size(), p);
    const LocalTvarProblem problem = local_tvar_problem(ehat, p, u, h_e, kernel);
    const Eigen::VectorXd start = solve_local(problem);
    return coordinate_descent(problem, penalty_levels(weights, lambda, gamma, h_e), start, options);
}

double bic_value(double rss, std::size_t df, std::size_t T, double h_e) {
    const double th = static_cast<double>(T) * h_e;
    return std::log(rss) + static_cast<double>(df) * std::log(th) / th;
}

UlassoPathSolver::UlassoPathSolver(std::span<const double> ehat, std::size_t p, double h_e,
                                   const KernelSpec& kernel, AdaptiveWeights weights)
    : T_(ehat.size()), p_(p), h_e_(h_e), weights_(std::move(weights)) {
    check_tvar_sample(T_, p);
    if (weights_.w.size() != p) throw InvalidArgument("adaptive weights do not match the tvAR order");
    problems_.reserve(T_);
    unpenalized_.reserve(T_);
    for (std::size_t t = 1; t <= T_; ++t) {
        const double u = static_cast<double>(t) / static_cast<double>(T_);
        problems_.push_back(local_tvar_problem(ehat, p, u, h_e, kernel));
        try {
            unpenalized_.push_back(solve_local(problems_.back()));
        } catch (const SingularDesign&) {
            throw SingularDesign("tvAR fit singular at grid point t = " + std::to_string(t), t);
        }
    }
}

UlassoSolution UlassoPathSolver::solve(double lambda, double gamma, const DescentOptions& options) const {
    if (!(lambda >= 0.0) || !(gamma >= 0.0)) throw InvalidArgument("tuning parameters must be nonnegative");
    const auto P = static_cast<Eigen::Index>(p_);
    const auto G = static_cast<Eigen::Index>(T_);
    const Eigen::VectorXd levels = penalty_levels(weights_, lambda, gamma, h_e_);

    UlassoSolution sol;
    sol.lambda = lambda;
    sol.gamma = gamma;
    sol.path.p = p_;
    sol.path.bandwidth = h_e_;
    sol.path.grid = observation_grid(T_);
    sol.path.phi.resize(P, G);
    sol.path.dphi_scaled.resize(P, G);

    double loss_sum = 0.0;
    for (Eigen::Index g = 0; g < G; ++g) {
        const auto gi = static_cast<std::size_t>(g);
        const PenalizedFit fit = coordinate_descent(problems_[gi], levels, unpenalized_[gi], options);
        if (!fit.converged) ++sol.nonconverged;
        sol.path.phi.col(g) = fit.alpha.head(P);
        sol.path.dphi_scaled.col(g) = fit.alpha.tail(P);
        loss_sum += problems_[gi].loss(fit.alpha);
    }
    sol.s1 = nonzero_rows(sol.path.phi);
    sol.s2 = nonzero_rows(sol.path.dphi_scaled);
    sol.df = sol.s1.size() + sol.s2.size();
    sol.rss = loss_sum / (static_cast<double>(T_) * static_cast<double>(T_));
    sol.bic = bic_value(sol.rss, sol.df, T_, h_e_);
    return sol;
}

UlassoSolution fit_penalized_path(std::span<const double> ehat, std::size_t p, double h_e,
                                  const KernelSpec& kernel, double lambda, double gamma,
                                  const AdaptiveWeights& weights) {
    return UlassoPathSolver(ehat, p, h_e, kernel, weights).solve(lambda, gamma);
}

namespace {

bool better(const UlassoSolution& candidate, const UlassoSolution& best) {
    if (candidate.bic < best.bic) return true;
    if (candidate.bic > best.bic) return false;
    if (candidate.lambda != best.lambda) return candidate.lambda > best.lambda;
    return candidate.gamma > best.gamma;
}

template <typename Cells>
UlassoSolution search(std::span<const double> ehat, std::size_t p, double h_e, const KernelSpec& kernel,
                      const Cells& cells) {
    const TvarPath pilot = fit_path(ehat, p, h_e, kernel);
    const UlassoPathSolver solver(ehat, p, h_e, kernel, adaptive_weights(pilot));
    bool found = false;
    UlassoSolution best;
    for (const auto& [lambda, gamma] : cells) {
        UlassoSolution sol = solver.solve(lambda, gamma);
        if (std::isnan(sol.bic)) continue;
        if (!found || better(sol, best)) {
            best = std::move(sol);
            found = true;
        }
    }
    if (!found) throw AllFitsFailed("no (lambda, gamma) cell produced a finite BIC");
    return best;
}

}  // namespace

UlassoSolution select_tuning(std::span<const double> ehat, std::size_t p, double h_e, const KernelSpec& kernel,
                             std::span<const double> grid_lambda, std::span<const double> grid_gamma) {
    check_grid(grid_lambda, "lambda");
    check_grid(grid_gamma, "gamma");
    std::vector<std::pair<double, double>> cells;
    for (double l : grid_lambda)
        for (double g : grid_gamma) cells.emplace_back(l, g);
    return search(ehat, p, h_e, kernel, cells);
}

UlassoSolution select_tuning_shared(std::span<const double> ehat, std::size_t p, double h_e,
                                    const KernelSpec& kernel, std::span<const double> grid) {
    check_grid(grid, "lambda");
    std::vector<std::pair<double, double>> cells;
    for (double l : grid) cells.emplace_back(l, l);
    return search(ehat, p, h_e, kernel, cells);
}

std::vector<double> default_tuning_grid(std::size_t T, std::size_t count) {
    const double dT = static_cast<double>(T);
    const double scale = std::pow(dT, 0.2) * std::sqrt(std::log(dT));
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double frac = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        grid[i] = scale * std::pow(10.0, -2.0 + 4.0 * frac);
    }
    return grid;
}

double constant_coefficient_estimate(const UlassoSolution& solution, std::size_t k) {
    const bool in_s1 = std::find(solution.s1.begin(), solution.s1.end(), k) != solution.s1.end();
    const bool in_s2 = std::find(solution.s2.begin(), solution.s2.end(), k) != solution.s2.end();
    if (!in_s1 || in_s2)
        throw NotIdentifiedConstant("lag " + std::to_string(k) + " is not identified as a nonzero constant");
    return solution.path.phi.row(static_cast<Eigen::Index>(k - 1)).mean();
}

}  // namespace tvreg
