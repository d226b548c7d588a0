#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dualwin/matrix.hpp"
#include "dualwin/ofdm_config.hpp"

namespace dualwin {

struct WindowKind {
    enum class Family { rectangular, hamming, dolph_chebyshev };

    Family family = Family::rectangular;
    double attenuation_db = 0.0;  // Dolph-Chebyshev sidelobe attenuation; must exceed 13 dB

    static WindowKind rectangular() { return {Family::rectangular, 0.0}; }
    static WindowKind hamming() { return {Family::hamming, 0.0}; }
    static WindowKind dolph_chebyshev(double attenuation_db) { return {Family::dolph_chebyshev, attenuation_db}; }

    /// "rectangular", "hamming", "chebyshev80", ...
    std::string tag() const;
    /// Inverse of tag(); also accepts "chebyshev:<dB>" and "dolph_chebyshev(<dB>)".
    static WindowKind parse(const std::string& text);

    void validate() const;
    bool operator==(const WindowKind&) const = default;
};

/// Peak-normalized (max = 1) weights. Hamming is 0.54 - 0.46 cos(2 pi k / (L - 1));
/// Dolph-Chebyshev is the inverse DFT of the sampled Chebyshev polynomial, so
/// every sidelobe sits at exactly -attenuation_db.
std::vector<double> make_window(const WindowKind& kind, std::size_t length);

/// Separable N x M window, outer product of the subcarrier-axis and
/// symbol-axis windows.
struct WindowMatrix {
    Matrix<double> weights;
    WindowKind kind_k;
    WindowKind kind_l;

    std::string tag() const;
};

WindowMatrix window_matrix(const WindowKind& kind_k, const WindowKind& kind_l, const OfdmConfig& config);
inline WindowMatrix window_matrix(const WindowKind& kind, const OfdmConfig& config) {
    return window_matrix(kind, kind, config);
}

struct WindowProfile {
    double psl_db = 0.0;                     // mainlobe peak over highest sidelobe
    std::size_t mainlobe_halfwidth_bins = 0; // peak to first local minimum below -20 dB
    double sidelobe_ripple_db = 0.0;         // std-dev of the sidelobe peak levels
    std::size_t sidelobe_count = 0;
};

/// Characterizes a window from its |DFT|^2 zero-padded to length * oversample.
/// Bins are oversampled bins, so with oversample = N_Per / N they are
/// periodogram bins.
WindowProfile profile_window(const WindowKind& kind, std::size_t length, std::size_t oversample);

/// Distance from the spectral peak to the first bin that is at or below
/// -level_db, or to the first local minimum if that comes earlier. This sizes
/// the cancellation mask of the binary detector.
std::size_t mainlobe_extent_bins(const WindowKind& kind, std::size_t length, std::size_t oversample,
                                 double level_db);

}  // namespace dualwin
