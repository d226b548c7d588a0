#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dualwin {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// master seed so that trial t of SNR point s is reproducible regardless of
/// scheduling order.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// derive_seed(master, {a, b, c}) folds each path component into the seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

// Stream identifiers for derive_seed; keep these stable, they are part of the
// reproducibility contract of a sweep.
namespace stream {
inline constexpr std::uint64_t scene = 1;
inline constexpr std::uint64_t frame = 2;
inline constexpr std::uint64_t noise = 3;
}  // namespace stream

/// Seedable generator with distribution transforms that do not depend on the
/// standard library implementation (std::normal_distribution is unspecified).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Standard normal via Box-Muller; caches the second variate.
    double normal();

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace dualwin
