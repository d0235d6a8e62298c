#pragma once

#include <functional>

namespace tvreg {

enum class KernelFamily { Epanechnikov };

/// A symmetric kernel with compact support [-support, support].
struct KernelSpec {
    KernelFamily family = KernelFamily::Epanechnikov;

    double support() const noexcept { return 1.0; }
};

inline constexpr KernelSpec epanechnikov{};

/// mu2 = ∫t²K, nu_j = ∫t^j K².
struct KernelMoments {
    double mu2 = 0.0;
    double nu0 = 0.0;
    double nu1 = 0.0;
    double nu2 = 0.0;
};

double eval(const KernelSpec& kernel, double x) noexcept;

/// K_h(x) = K(x/h)/h. Throws NonPositiveBandwidth for h <= 0.
double eval_scaled(const KernelSpec& kernel, double x, double h);

KernelMoments moments(const KernelSpec& kernel);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

}  // namespace tvreg
