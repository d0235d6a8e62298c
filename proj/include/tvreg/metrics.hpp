#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tvreg/simulate.hpp"
#include "tvreg/tvar.hpp"
#include "tvreg/ulasso.hpp"

namespace tvreg {

/// Root mean squared difference. Throws LengthMismatch.
double rase(std::span<const double> estimates, std::span<const double> truth);

/// RASE of phi_k (1-based) over the path grid against the model's phi_k.
double rase_phi(const TvarPath& path, const CoefficientModel& model, std::size_t k);

enum class Fit { Underfitted = 0, Correct = 1, Overfitted = 2 };

std::string to_string(Fit fit);

struct SelectionOutcome {
    Fit vs = Fit::Correct;
    Fit vs_ci = Fit::Correct;
};

/// Underfitting takes precedence over overfitting in VS & CI.
SelectionOutcome classify(const IndexSet& s1_hat, const IndexSet& s2_hat, const StructureTruth& truth);

/// Probe points of the surface estimators (u, x).
inline constexpr std::array<std::array<double, 2>, 3> kProbePoints{{{0.2, -0.5}, {0.5, 0.0}, {0.75, 0.4}}};

/// Everything one Monte Carlo replication contributes to the report.
struct ReplicationRecord {
    std::size_t index = 0;
    bool ok = false;
    std::string failure;
    /// Which estimation routes ran (see Routes in experiment.hpp).
    bool has_known = false;
    bool has_selection = false;

    double h_star = 0.0;
    double h = 0.0;
    double h_e = 0.0;
    double h_e_selection = 0.0;

    double rase_preliminary = 0.0;
    double rase_refined = 0.0;
    double rase_oracle = 0.0;
    /// Refined fit whitened with the ULASSO coefficient path.
    double rase_refined_selected = 0.0;

    double lambda = 0.0;
    double gamma = 0.0;
    IndexSet s1_hat;
    IndexSet s2_hat;
    SelectionOutcome selection;
    /// RASE of the ULASSO phi_k estimate, k = 1..p.
    std::vector<double> rase_phi;
    /// Mean of the ULASSO phi_k path for the model's constant lag when it
    /// was identified as a nonzero constant.
    std::optional<double> constant_estimate;

    std::array<double, 3> probe_preliminary{};
    std::array<double, 3> probe_refined{};
};

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;
    /// False when fewer than two values exist; sd is then reported as 0.
    bool sd_defined = false;
};

Summary summarize(std::span<const double> values);

struct ExperimentReport {
    std::string model;
    double sigma = 0.0;
    std::size_t T = 0;
    std::size_t replications = 0;
    std::size_t failures = 0;
    /// Records in replication-index order.
    std::vector<ReplicationRecord> records;

    Summary preliminary;
    Summary refined;
    Summary oracle;
    Summary refined_selected;
    std::vector<Summary> phi;
    /// Fractions over the successful records that ran the selection route.
    std::array<double, 3> vs{};
    std::array<double, 3> vs_ci{};

    /// Lag checked for constant-coefficient estimation (0 if the model has none).
    std::size_t constant_lag = 0;
    double constant_truth = 0.0;
    std::size_t constant_count = 0;
    double constant_bias = 0.0;
    double constant_se = 0.0;

    std::array<Summary, 3> probe_preliminary;
    std::array<Summary, 3> probe_refined;
};

/// First lag in S1 \ S2 of the model's truth, or 0.
std::size_t constant_lag(const CoefficientModel& model);

/// Aggregates the successful records; result does not depend on input order.
/// Throws EmptyRecords.
ExperimentReport aggregate(std::vector<ReplicationRecord> records, const CoefficientModel& model, double sigma,
                           std::size_t T);

/// Third and fourth standardized moments (sample skewness, excess kurtosis).
std::pair<double, double> skewness_kurtosis(std::span<const double> values);

}  // namespace tvreg
