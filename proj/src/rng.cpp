#include "tvreg/rng.hpp"

#include <cmath>

namespace tvreg {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) noexcept {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ (index * 0x9e3779b97f4a7c15ULL));
    return splitmix64(s ^ (stream + 0x632be59bd9b4e019ULL));
}

double NormalStream::uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalStream::normal() noexcept {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double a = 0.0;
    double b = 0.0;
    double s = 0.0;
    do {
        a = 2.0 * uniform() - 1.0;
        b = 2.0 * uniform() - 1.0;
        s = a * a + b * b;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = b * factor;
    has_cached_ = true;
    return a * factor;
}

}  // namespace tvreg
