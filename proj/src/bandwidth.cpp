#include "tvreg/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tvreg/error.hpp"
#include "tvreg/locallinear.hpp"
#include "tvreg/tvar.hpp"

namespace tvreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_candidates(std::span<const double> candidates) {
    if (candidates.empty()) throw InvalidArgument("bandwidth candidate list is empty");
    for (double h : candidates)
        if (!(h > 0.0)) throw NonPositiveBandwidth(h);
}

}  // namespace

BandwidthSet derive_set(double h_star, double h_e, double factor) {
    if (!(h_star > 0.0)) throw NonPositiveBandwidth(h_star);
    if (!(h_e > 0.0)) throw NonPositiveBandwidth(h_e);
    if (!(factor > 0.0) || factor > 1.0) throw InvalidArgument("bandwidth factor must lie in (0, 1]");
    return {factor * h_star, h_e, h_star};
}

std::size_t argmin_prefer_larger(std::span<const double> candidates, std::span<const double> scores) {
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!std::isfinite(scores[i])) continue;
        if (best == candidates.size()) {
            best = i;
            continue;
        }
        // Scores equal up to rounding count as ties.
        const double slack = 1e-12 * std::max(std::abs(scores[i]), std::abs(scores[best])) + 1e-18;
        if (scores[i] < scores[best] - slack ||
            (std::abs(scores[i] - scores[best]) <= slack && candidates[i] > candidates[best]))
            best = i;
    }
    if (best == candidates.size()) throw AllCandidatesFailed("every bandwidth candidate failed");
    return best;
}

std::vector<double> loocv_surface_scores(const TimeSeries& data, std::span<const double> candidates,
                                         const KernelSpec& kernel, const FitOptions& base, double trim) {
    check_candidates(candidates);
    if (!base.weights.empty()) throw InvalidArgument("leave-one-out scoring sets its own weights");
    if (!(trim >= 0.0 && trim < 0.5)) throw InvalidArgument("trim must lie in [0, 0.5)");
    const std::size_t T = data.size();
    double x_lo = -kInf, x_hi = kInf;
    if (trim > 0.0) {
        std::vector<double> sorted = data.x();
        std::sort(sorted.begin(), sorted.end());
        const auto k = static_cast<std::size_t>(trim * static_cast<double>(T));
        x_lo = sorted[k];
        x_hi = sorted[T - 1 - k];
    }
    const std::span<const double> ys = base.response.empty() ? std::span<const double>(data.y()) : base.response;
    FitOptions options = base;
    std::vector<double> weights(T, 1.0);
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (double h : candidates) {
        double score = 0.0;
        try {
            for (std::size_t t = std::max<std::size_t>(base.sample_start, 1); t <= T; ++t) {
                const double x = data.x()[t - 1];
                if (x < x_lo || x > x_hi) continue;
                weights[t - 1] = 0.0;
                options.weights = weights;
                const SurfaceFit fit = fit_point(data, data.time(t), x, h, kernel, options);
                weights[t - 1] = 1.0;
                const double r = ys[t - 1] - fit.g;
                score += r * r;
            }
        } catch (const SingularDesign&) {
            std::fill(weights.begin(), weights.end(), 1.0);
            score = kInf;
        }
        scores.push_back(score);
    }
    return scores;
}

double loocv_surface(const TimeSeries& data, std::span<const double> candidates, const KernelSpec& kernel,
                     const FitOptions& base, double trim) {
    const auto scores = loocv_surface_scores(data, candidates, kernel, base, trim);
    return candidates[argmin_prefer_larger(candidates, scores)];
}

std::vector<double> loocv_tvar_scores(std::span<const double> ehat, std::size_t p,
                                      std::span<const double> candidates, const KernelSpec& kernel) {
    check_candidates(candidates);
    check_tvar_sample(ehat.size(), p);
    const std::size_t T = ehat.size();
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (double h_e : candidates) {
        double score = 0.0;
        try {
            for (std::size_t t = p + 1; t <= T; ++t) {
                const double u = static_cast<double>(t) / static_cast<double>(T);
                const Eigen::VectorXd alpha = solve_local(local_tvar_problem(ehat, p, u, h_e, kernel, t));
                double prediction = 0.0;
                for (std::size_t k = 1; k <= p; ++k)
                    prediction += alpha[static_cast<Eigen::Index>(k - 1)] * ehat[t - k - 1];
                const double r = ehat[t - 1] - prediction;
                score += r * r;
            }
        } catch (const SingularDesign&) {
            score = kInf;
        }
        scores.push_back(score);
    }
    return scores;
}

double loocv_tvar(std::span<const double> ehat, std::size_t p, std::span<const double> candidates,
                  const KernelSpec& kernel) {
    const auto scores = loocv_tvar_scores(ehat, p, candidates, kernel);
    return candidates[argmin_prefer_larger(candidates, scores)];
}

std::vector<double> log_spaced_candidates(std::size_t T, double exponent, double lo, double hi,
                                          std::size_t count) {
    const double scale = std::pow(static_cast<double>(T), -exponent);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double frac = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = scale * lo * std::pow(hi / lo, frac);
    }
    return out;
}

}  // namespace tvreg
