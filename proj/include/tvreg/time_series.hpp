#pragma once

#include <cstddef>
#include <vector>

namespace tvreg {

/// Observed pairs (X_t, Y_t), t = 1..T, on rescaled time u_t = t/T.
/// Storage is 0-based: x[t-1] holds X_t.
class TimeSeries {
public:
    TimeSeries() = default;
    /// Throws InvalidArgument unless sizes match, T >= 3 and every value is finite.
    TimeSeries(std::vector<double> x, std::vector<double> y);

    std::size_t size() const noexcept { return x_.size(); }
    const std::vector<double>& x() const noexcept { return x_; }
    const std::vector<double>& y() const noexcept { return y_; }

    /// Rescaled time of observation t (1-based).
    double time(std::size_t t) const noexcept {
        return static_cast<double>(t) / static_cast<double>(x_.size());
    }

private:
    std::vector<double> x_;
    std::vector<double> y_;
};

}  // namespace tvreg
