#include "tvreg/kernels.hpp"

#include <cmath>

#include "tvreg/error.hpp"

namespace tvreg {

double eval(const KernelSpec& kernel, double x) noexcept {
    switch (kernel.family) {
        case KernelFamily::Epanechnikov: {
            const double ax = std::abs(x);
            return ax <= 1.0 ? 0.75 * (1.0 - ax * ax) : 0.0;
        }
    }
    return 0.0;
}

double eval_scaled(const KernelSpec& kernel, double x, double h) {
    if (!(h > 0.0)) throw NonPositiveBandwidth(h);
    return eval(kernel, x / h) / h;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double m, double fm,
               double b, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, fa, m, fm, b, fb, whole, tol, 50);
}

KernelMoments moments(const KernelSpec& kernel) {
    const double c = kernel.support();
    auto k = [&](double t) { return eval(kernel, t); };
    KernelMoments m;
    m.mu2 = integrate([&](double t) { return t * t * k(t); }, -c, c);
    m.nu0 = integrate([&](double t) { return k(t) * k(t); }, -c, c);
    m.nu1 = integrate([&](double t) { return t * k(t) * k(t); }, -c, c);
    m.nu2 = integrate([&](double t) { return t * t * k(t) * k(t); }, -c, c);
    return m;
}

}  // namespace tvreg
