#include "dualwin/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dualwin/error.hpp"

namespace dualwin {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t s = mix_seed(master);
    for (auto p : path) s = mix_seed(s ^ mix_seed(p + 0x632be59bd9b4e019ULL));
    return s;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) fail(ErrorCode::invalid_argument, "Rng::below: n must be positive");
    // Rejection keeps the draw unbiased for any n.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

}  // namespace dualwin
