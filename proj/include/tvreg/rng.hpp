#pragma once

#include <cstdint>
#include <random>

namespace tvreg {

/// Stream derivation and variate generation used by every simulation.
///
/// Algorithm (pinned, version 1):
///   * stream seeds are derived by SplitMix64 finalization of
///     (seed, index, stream) mixed with the golden-ratio increment;
///   * each stream is a std::mt19937_64, whose output sequence is fixed by
///     the C++ standard;
///   * uniforms take the top 53 bits of one draw, u in [0, 1);
///   * normals use the Marsaglia polar method, caching the second variate.
/// Changing any step changes every simulated number and must bump
/// kRngVersion.
inline constexpr int kRngVersion = 1;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of sub-stream `stream` of replication `index` under master `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) noexcept;

class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double uniform() noexcept;
    double normal() noexcept;

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace tvreg
