#pragma once

#include <cstddef>

namespace dualwin {

inline constexpr double speed_of_light = 3.0e8;  // m/s

/// Waveform and periodogram constants shared by every stage of the chain.
struct OfdmConfig {
    std::size_t n_subcarriers = 64;       // N
    std::size_t n_symbols = 256;          // M
    std::size_t n_per = 256;              // delay-axis transform size (>= N)
    std::size_t m_per = 1024;             // Doppler-axis transform size (>= M)
    double subcarrier_spacing_hz = 312.5e3;
    double symbol_duration_s = 4.0e-6;    // includes the cyclic prefix
    double carrier_hz = 5.5e9;
    int mod_order = 16;

    /// N=64, M=256, 4x zero padding, 16-QAM, T_O=4 us, 312.5 kHz, 5.5 GHz.
    static OfdmConfig standard();

    /// Throws Error(invalid_argument) if any invariant is broken.
    void validate() const;

    double cyclic_prefix_s() const { return symbol_duration_s - 1.0 / subcarrier_spacing_hz; }
    /// Largest range whose round-trip delay is inside the cyclic prefix.
    double max_unambiguous_range_m() const { return speed_of_light * cyclic_prefix_s() / 2.0; }
    /// Range spanned by one delay bin of the padded transform.
    double range_bin_m() const;
    /// Radial velocity spanned by one Doppler bin of the padded transform.
    double velocity_bin_mps() const;

    bool operator==(const OfdmConfig&) const = default;
};

}  // namespace dualwin
