#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tvreg/kernels.hpp"
#include "tvreg/locallinear.hpp"
#include "tvreg/time_series.hpp"

namespace tvreg {

struct BandwidthSet {
    double h = 0.0;       // preliminary surface fit
    double h_e = 0.0;     // tvAR coefficient fit
    double h_star = 0.0;  // refined surface fit
};

/// h = factor * h_star with 0 < factor <= 1.
BandwidthSet derive_set(double h_star, double h_e, double factor = 0.5);

/// Leave-one-out score per candidate; +inf where any left-out fit fails.
/// `base` may override the response, the first usable row and the window
/// policy; only rows t >= base.sample_start are left out and scored.
/// A positive `trim` drops from the score the rows whose X_t falls outside
/// the empirical trim and 1-trim quantiles of X.
std::vector<double> loocv_surface_scores(const TimeSeries& data, std::span<const double> candidates,
                                         const KernelSpec& kernel, const FitOptions& base = {}, double trim = 0.0);

/// Candidate with the smallest leave-one-out prediction error of the
/// surface fit. Ties go to the larger bandwidth. Throws AllCandidatesFailed.
double loocv_surface(const TimeSeries& data, std::span<const double> candidates, const KernelSpec& kernel,
                     const FitOptions& base = {}, double trim = 0.0);

std::vector<double> loocv_tvar_scores(std::span<const double> ehat, std::size_t p,
                                      std::span<const double> candidates, const KernelSpec& kernel);

/// Same selection for the tvAR stage: observation t is dropped from the
/// local fit at u = t/T and predicted from its own lags, t = p+1..T.
double loocv_tvar(std::span<const double> ehat, std::size_t p, std::span<const double> candidates,
                  const KernelSpec& kernel);

/// Index of the best score under the tie rule above.
std::size_t argmin_prefer_larger(std::span<const double> candidates, std::span<const double> scores);

/// `count` log-spaced values on [lo, hi] * T^{-exponent}.
std::vector<double> log_spaced_candidates(std::size_t T, double exponent, double lo = 0.5, double hi = 2.5,
                                          std::size_t count = 12);

inline std::vector<double> default_surface_candidates(std::size_t T) {
    return log_spaced_candidates(T, 1.0 / 6.0);
}

inline std::vector<double> default_tvar_candidates(std::size_t T) {
    return log_spaced_candidates(T, 1.0 / 5.0);
}

}  // namespace tvreg
