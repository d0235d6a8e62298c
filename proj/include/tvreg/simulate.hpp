#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tvreg/time_series.hpp"
#include "tvreg/tvar.hpp"
#include "tvreg/ulasso.hpp"

namespace tvreg {

enum class ModelLabel { A, B, C, Custom };

/// tvAR(p) coefficient functions phi_1..phi_p on u in [0, 1].
struct CoefficientModel {
    ModelLabel label = ModelLabel::Custom;
    std::vector<std::function<double(double)>> phi;
    StructureTruth truth;

    std::size_t order() const noexcept { return phi.size(); }
    /// Largest nonzero lag, i.e. max(S1), or 0.
    std::size_t true_order() const noexcept { return truth.s1.empty() ? 0 : truth.s1.back(); }
};

/// (-0.1 + 0.6 sin 2 pi u, 0, 0, 0, 0)
CoefficientModel model_a();
/// (3(u - 0.4)^2 - 0.6, 0.3, 0, 0, 0)
CoefficientModel model_b();
/// (5(u - 0.5)^2 - 0.6, -1 + sin^2(pi u), 0, 0, 0)
CoefficientModel model_c();
/// Accepts "a", "b", "c" (case-insensitive); throws InvalidArgument.
CoefficientModel model_by_name(const std::string& name);
std::string model_name(ModelLabel label);

/// The regression surface of the simulation study, 1.5 cos(2 pi u) x^2.
double true_surface(double u, double x);

/// Coefficient path of `model` on the observation grid of length T. The
/// derivative row is a central difference with bandwidth 1.
TvarPath true_path(const CoefficientModel& model, std::size_t T);

struct SimulationConfig {
    std::size_t T = 200;
    double sigma = 0.5;
    CoefficientModel model = model_a();
    std::uint64_t seed = 1;
    std::size_t replications = 1;
    std::size_t burn_in = 200;

    void validate() const;
};

/// X_t = 0.7 (t/T) X_{t-1} + 0.5 xi_t with X_0 = 0.
std::vector<double> gen_regressor(std::size_t T, std::uint64_t seed);
std::vector<double> gen_regressor_from_innovations(std::span<const double> xi);

struct ErrorDraw {
    std::vector<double> e;
    /// Standard normal draws that drove the recursion (burn_in + T of them).
    std::vector<double> innovations;
    bool explosive = false;
};

/// e_t = sum_k phi_k(t/T) e_{t-k} + sigma z_t, run for burn_in + T steps from
/// a zero state with coefficients frozen at u = 0 during burn-in.
ErrorDraw gen_error(std::size_t T, const CoefficientModel& model, double sigma, std::uint64_t seed,
                    std::size_t burn_in);
ErrorDraw gen_error_from_innovations(std::size_t T, const CoefficientModel& model, double sigma,
                                     std::span<const double> z, std::size_t burn_in);

/// |e_t| above this marks the draw as explosive.
inline constexpr double kExplosiveBound = 1e6;

struct SimulatedDataset {
    TimeSeries series;
    std::vector<double> errors;
    /// g(t/T, X_t) at every observation.
    std::vector<double> surface;
    bool explosive = false;
};

SimulatedDataset gen_dataset(const SimulationConfig& config, std::size_t replication_index);

}  // namespace tvreg
