#include "dualwin/ofdm_config.hpp"

#include <cmath>
#include <string>

#include "dualwin/error.hpp"
#include "dualwin/matrix.hpp"

namespace dualwin {

OfdmConfig OfdmConfig::standard() { return OfdmConfig{}; }

void OfdmConfig::validate() const {
    auto bad = [](const std::string& msg) { fail(ErrorCode::invalid_argument, "OfdmConfig: " + msg); };
    if (n_subcarriers < 1 || n_symbols < 1) bad("N and M must be >= 1");
    if (n_per < n_subcarriers) bad("N_Per must be >= N");
    if (m_per < n_symbols) bad("M_Per must be >= M");
    if (!(subcarrier_spacing_hz > 0.0)) bad("subcarrier spacing must be positive");
    if (!(symbol_duration_s >= 1.0 / subcarrier_spacing_hz)) bad("T_O must be >= 1/delta_f");
    if (!(carrier_hz > 0.0)) bad("f0 must be positive");
    const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(mod_order))));
    if (mod_order < 4 || root * root != mod_order) bad("mod_order must be a perfect square >= 4");
}

double OfdmConfig::range_bin_m() const {
    return speed_of_light / (2.0 * subcarrier_spacing_hz * static_cast<double>(n_per));
}

double OfdmConfig::velocity_bin_mps() const {
    return speed_of_light / (2.0 * carrier_hz * symbol_duration_s * static_cast<double>(m_per));
}

double frame_energy(const ComplexFrame& f) noexcept {
    double e = 0.0;
    for (const auto& v : f.data.flat()) e += std::norm(v);
    return e;
}

}  // namespace dualwin
