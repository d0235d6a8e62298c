#include "tvreg/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "tvreg/error.hpp"
#include "tvreg/rng.hpp"

namespace tvreg {

namespace {

constexpr std::uint64_t kRegressorStream = 1;
constexpr std::uint64_t kErrorStream = 2;

std::function<double(double)> zero() {
    return [](double) { return 0.0; };
}

}  // namespace

CoefficientModel model_a() {
    CoefficientModel m;
    m.label = ModelLabel::A;
    m.phi = {[](double u) { return -0.1 + 0.6 * std::sin(2.0 * std::numbers::pi * u); }, zero(), zero(), zero(),
             zero()};
    m.truth = {{1}, {1}};
    return m;
}

CoefficientModel model_b() {
    CoefficientModel m;
    m.label = ModelLabel::B;
    m.phi = {[](double u) { return 3.0 * (u - 0.4) * (u - 0.4) - 0.6; }, [](double) { return 0.3; }, zero(), zero(),
             zero()};
    m.truth = {{1, 2}, {1}};
    return m;
}

CoefficientModel model_c() {
    CoefficientModel m;
    m.label = ModelLabel::C;
    m.phi = {[](double u) { return 5.0 * (u - 0.5) * (u - 0.5) - 0.6; },
             [](double u) {
                 const double s = std::sin(std::numbers::pi * u);
                 return -1.0 + s * s;
             },
             zero(), zero(), zero()};
    m.truth = {{1, 2}, {1, 2}};
    return m;
}

CoefficientModel model_by_name(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "a") return model_a();
    if (lower == "b") return model_b();
    if (lower == "c") return model_c();
    throw InvalidArgument("unknown coefficient model '" + name + "' (expected a, b or c)");
}

std::string model_name(ModelLabel label) {
    switch (label) {
        case ModelLabel::A: return "a";
        case ModelLabel::B: return "b";
        case ModelLabel::C: return "c";
        case ModelLabel::Custom: return "custom";
    }
    return "custom";
}

double true_surface(double u, double x) {
    return 1.5 * std::cos(2.0 * std::numbers::pi * u) * x * x;
}

TvarPath true_path(const CoefficientModel& model, std::size_t T) {
    TvarPath path;
    path.p = model.order();
    path.bandwidth = 1.0;
    path.grid = observation_grid(T);
    const auto P = static_cast<Eigen::Index>(path.p);
    const auto G = static_cast<Eigen::Index>(T);
    path.phi.resize(P, G);
    path.dphi_scaled.resize(P, G);
    constexpr double step = 1e-6;
    for (Eigen::Index k = 0; k < P; ++k) {
        const auto& f = model.phi[static_cast<std::size_t>(k)];
        for (Eigen::Index g = 0; g < G; ++g) {
            const double u = path.grid[static_cast<std::size_t>(g)];
            path.phi(k, g) = f(u);
            path.dphi_scaled(k, g) = (f(u + step) - f(u - step)) / (2.0 * step);
        }
    }
    return path;
}

void SimulationConfig::validate() const {
    if (T < 50) throw InvalidArgument("simulation needs T >= 50");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive");
    if (replications < 1) throw InvalidArgument("replications must be at least 1");
    if (model.order() == 0) throw InvalidArgument("coefficient model has no lags");
}

std::vector<double> gen_regressor_from_innovations(std::span<const double> xi) {
    const std::size_t T = xi.size();
    std::vector<double> x(T);
    double prev = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
        const double a = 0.7 * static_cast<double>(t) / static_cast<double>(T);
        prev = a * prev + 0.5 * xi[t - 1];
        x[t - 1] = prev;
    }
    return x;
}

std::vector<double> gen_regressor(std::size_t T, std::uint64_t seed) {
    NormalStream rng(seed);
    std::vector<double> xi(T);
    for (double& v : xi) v = rng.normal();
    return gen_regressor_from_innovations(xi);
}

ErrorDraw gen_error_from_innovations(std::size_t T, const CoefficientModel& model, double sigma,
                                     std::span<const double> z, std::size_t burn_in) {
    const std::size_t n = burn_in + T;
    if (z.size() != n) throw InvalidArgument("innovation count must equal burn_in + T");
    const std::size_t p = model.order();
    std::vector<double> u0(p);
    for (std::size_t k = 0; k < p; ++k) u0[k] = model.phi[k](0.0);

    ErrorDraw out;
    out.innovations.assign(z.begin(), z.end());
    std::vector<double> state(n, 0.0);
    std::vector<double> coef(p);
    for (std::size_t s = 0; s < n; ++s) {
        if (s < burn_in) {
            coef = u0;
        } else {
            const double u = static_cast<double>(s - burn_in + 1) / static_cast<double>(T);
            for (std::size_t k = 0; k < p; ++k) coef[k] = model.phi[k](u);
        }
        double v = sigma * z[s];
        for (std::size_t k = 1; k <= p && k <= s; ++k) v += coef[k - 1] * state[s - k];
        state[s] = v;
        if (std::abs(v) > kExplosiveBound) out.explosive = true;
    }
    out.e.assign(state.begin() + static_cast<std::ptrdiff_t>(burn_in), state.end());
    return out;
}

ErrorDraw gen_error(std::size_t T, const CoefficientModel& model, double sigma, std::uint64_t seed,
                    std::size_t burn_in) {
    NormalStream rng(seed);
    std::vector<double> z(burn_in + T);
    for (double& v : z) v = rng.normal();
    return gen_error_from_innovations(T, model, sigma, z, burn_in);
}

SimulatedDataset gen_dataset(const SimulationConfig& config, std::size_t replication_index) {
    config.validate();
    const std::size_t T = config.T;
    std::vector<double> x = gen_regressor(T, derive_seed(config.seed, replication_index, kRegressorStream));
    ErrorDraw err = gen_error(T, config.model, config.sigma,
                              derive_seed(config.seed, replication_index, kErrorStream), config.burn_in);
    std::vector<double> surface(T);
    std::vector<double> y(T);
    for (std::size_t t = 1; t <= T; ++t) {
        const double u = static_cast<double>(t) / static_cast<double>(T);
        surface[t - 1] = true_surface(u, x[t - 1]);
        y[t - 1] = surface[t - 1] + err.e[t - 1];
    }
    SimulatedDataset out{TimeSeries(std::move(x), std::move(y)), std::move(err.e), std::move(surface),
                         err.explosive};
    return out;
}

}  // namespace tvreg
