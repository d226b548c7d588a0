#include "dualwin/ofdm_frame.hpp"

#include <cmath>
#include <string>

#include "dualwin/error.hpp"
#include "dualwin/rng.hpp"

namespace dualwin {

namespace {

unsigned gray_to_binary(unsigned g) {
    for (unsigned shift = g >> 1; shift != 0; shift >>= 1) g ^= shift;
    return g;
}

}  // namespace

std::vector<cdouble> qam_alphabet(int mod_order) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(mod_order))));
    if (mod_order < 4 || side * side != mod_order)
        fail(ErrorCode::invalid_argument,
             "qam_alphabet: order " + std::to_string(mod_order) + " is not a square >= 4");

    // Mean of |c|^2 over the unscaled {+-1, +-3, ...}^2 grid is 2(L^2 - 1)/3.
    const double scale = 1.0 / std::sqrt(2.0 * (static_cast<double>(mod_order) - 1.0) / 3.0);
    auto level = [side](unsigned bits) {
        return 2.0 * static_cast<double>(gray_to_binary(bits)) - static_cast<double>(side - 1);
    };

    std::vector<cdouble> points(static_cast<std::size_t>(mod_order));
    const auto uside = static_cast<unsigned>(side);
    for (unsigned s = 0; s < static_cast<unsigned>(mod_order); ++s) {
        points[s] = cdouble(level(s / uside), level(s % uside)) * scale;
    }
    return points;
}

ComplexFrame generate_frame(const OfdmConfig& config, std::uint64_t seed) {
    config.validate();
    const auto alphabet = qam_alphabet(config.mod_order);
    Rng rng(seed);
    ComplexFrame frame{FrameRole::transmitted, Matrix<cdouble>(config.n_subcarriers, config.n_symbols)};
    for (auto& v : frame.data.flat()) v = alphabet[rng.below(alphabet.size())];
    return frame;
}

}  // namespace dualwin
