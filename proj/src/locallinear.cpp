#include "tvreg/locallinear.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tvreg/error.hpp"
#include "tvreg/linalg.hpp"

namespace tvreg {

TimeSeries::TimeSeries(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size())
        throw InvalidArgument("x and y lengths differ: " + std::to_string(x_.size()) + " vs " +
                              std::to_string(y_.size()));
    if (x_.size() < 3) throw InvalidArgument("a time series needs at least 3 observations");
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
            throw InvalidArgument("non-finite value at t = " + std::to_string(i + 1));
    }
}

namespace {

SurfaceFit fit_point_strict(const TimeSeries& data, double u, double x, double h, const KernelSpec& kernel,
                            const FitOptions& options) {
    const std::size_t T = data.size();
    if (options.sample_start < 1) throw InvalidArgument("sample_start is 1-based");
    if (!options.weights.empty() && options.weights.size() != T)
        throw InvalidArgument("weight override must have length T");
    if (!options.response.empty() && options.response.size() != T)
        throw InvalidArgument("response override must have length T");
    const auto& xs = data.x();
    const std::span<const double> ys = options.response.empty() ? std::span<const double>(data.y())
                                                                 : options.response;

    const double dT = static_cast<double>(T);
    const double reach = kernel.support() * h;
    const double first = std::max(static_cast<double>(options.sample_start), std::ceil((u - reach) * dT));
    const double last = std::min(dT, std::floor((u + reach) * dT));

    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    std::size_t count = 0;
    if (first <= last) {
        for (auto t = static_cast<std::size_t>(first); t <= static_cast<std::size_t>(last); ++t) {
            const double du = static_cast<double>(t) / dT - u;
            const double dx = xs[t - 1] - x;
            double w = eval_scaled(kernel, du, h);
            if (w == 0.0) continue;
            w *= eval_scaled(kernel, dx, h);
            if (!options.weights.empty()) w *= options.weights[t - 1];
            if (w == 0.0) continue;
            ++count;
            const Eigen::Vector3d z(1.0, du / h, dx / h);
            normal.noalias() += w * z * z.transpose();
            rhs.noalias() += (w * ys[t - 1]) * z;
        }
    }
    const std::size_t needed = options.window.mode == SparseWindow::Widen ? std::max<std::size_t>(3, options.window.min_count) : 3;
    if (count < needed)
        throw SingularDesign("local fit at (u=" + std::to_string(u) + ", x=" + std::to_string(x) + ") has only " +
                             std::to_string(count) + " weighted observations");
    Eigen::Vector3d beta;
    if (!linalg::solve_normal(normal, rhs, beta))
        throw SingularDesign("local normal matrix singular at (u=" + std::to_string(u) +
                             ", x=" + std::to_string(x) + ")");
    return {beta[0], beta[1], beta[2], count, h};
}

}  // namespace

SurfaceFit fit_point(const TimeSeries& data, double u, double x, double h, const KernelSpec& kernel,
                     const FitOptions& options) {
    if (!(h > 0.0)) throw NonPositiveBandwidth(h);
    const WindowPolicy& window = options.window;
    if (window.mode == SparseWindow::Fail) return fit_point_strict(data, u, x, h, kernel, options);
    if (!(window.widen_factor > 1.0)) throw InvalidArgument("widen_factor must exceed 1");
    double hw = h;
    for (int attempt = 0;; ++attempt, hw *= window.widen_factor) {
        try {
            return fit_point_strict(data, u, x, hw, kernel, options);
        } catch (const SingularDesign&) {
            if (attempt >= window.max_widen) throw;
        }
    }
}

namespace {

ResidualSeries fit_at_observations(const TimeSeries& data, double h, const KernelSpec& kernel,
                                   const FitOptions& options) {
    const std::size_t T = data.size();
    ResidualSeries out;
    out.ehat.resize(T);
    out.ghat_at_obs.resize(T);
    for (std::size_t t = 1; t <= T; ++t) {
        double g = 0.0;
        try {
            g = fit_point(data, data.time(t), data.x()[t - 1], h, kernel, options).g;
        } catch (const SingularDesign& e) {
            throw SingularDesign(std::string(e.what()) + " (observation t = " + std::to_string(t) + ")", t);
        }
        out.ghat_at_obs[t - 1] = g;
        out.ehat[t - 1] = data.y()[t - 1] - g;
    }
    return out;
}

}  // namespace

ResidualSeries preliminary_fit(const TimeSeries& data, double h, const KernelSpec& kernel,
                               const WindowPolicy& window) {
    if (!(h > 0.0)) throw NonPositiveBandwidth(h);
    return fit_at_observations(data, h, kernel, {.window = window});
}

std::vector<double> whiten(const TimeSeries& data, const ResidualSeries& prelim, const TvarPath& phi,
                           std::size_t p0) {
    const std::size_t T = data.size();
    if (prelim.ehat.size() != T) throw LengthMismatch("residual series length differs from T");
    if (phi.size() != T) throw InvalidArgument("coefficient path must live on the observation grid");
    std::vector<double> out = data.y();
    for (std::size_t t = p0 + 1; t <= T; ++t) {
        double ar = 0.0;
        for (std::size_t k = 1; k <= phi.p && k < t; ++k)
            ar += phi.phi(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(t - 1)) * prelim.ehat[t - k - 1];
        out[t - 1] -= ar;
    }
    return out;
}

ResidualSeries refined_fit(const TimeSeries& data, const ResidualSeries& prelim, const TvarPath& phi,
                           std::size_t p0, double h_star, const KernelSpec& kernel, const WindowPolicy& window) {
    const std::size_t T = data.size();
    if (p0 + 3 >= T)
        throw LagExceedsSample("lag " + std::to_string(p0) + " leaves too few observations (T = " +
                               std::to_string(T) + ")");
    if (!(h_star > 0.0)) throw NonPositiveBandwidth(h_star);
    const std::vector<double> response = whiten(data, prelim, phi, p0);
    ResidualSeries out = fit_at_observations(data, h_star, kernel, {.response = response, .sample_start = p0 + 1, .window = window});
    return out;
}

ResidualSeries oracle_fit(const TimeSeries& data, const ResidualSeries& prelim, const TvarPath& true_phi,
                          std::size_t p, double h_star, const KernelSpec& kernel, const WindowPolicy& window) {
    return refined_fit(data, prelim, true_phi, p, h_star, kernel, window);
}

std::vector<SurfaceFit> fit_grid(const TimeSeries& data, std::span<const double> us,
                                 std::span<const double> xs, double h, const KernelSpec& kernel,
                                 const FitOptions& options) {
    std::vector<SurfaceFit> out;
    out.reserve(us.size() * xs.size());
    for (double u : us)
        for (double x : xs) out.push_back(fit_point(data, u, x, h, kernel, options));
    return out;
}

}  // namespace tvreg
