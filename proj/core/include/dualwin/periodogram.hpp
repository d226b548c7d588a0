#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "dualwin/matrix.hpp"
#include "dualwin/ofdm_config.hpp"
#include "dualwin/windows.hpp"

namespace dualwin {

/// N_Per x M_Per periodogram; row n is the delay bin, column m the Doppler bin.
struct RangeDopplerMap {
    Matrix<double> power;
    OfdmConfig config;
    std::string window_tag;
};

struct PeakEstimate {
    std::size_t n = 0;
    std::size_t m = 0;
    double power = 0.0;
    double range_m = 0.0;
    double velocity_mps = 0.0;
};

/// Delay rows [0, n_max] are searched; all Doppler columns always are.
struct SearchRegion {
    std::size_t n_max = 0;

    static SearchRegion full(const OfdmConfig& config) { return {config.n_per - 1}; }
    /// Rows covering ranges up to max_range_m (clamped to the map).
    static SearchRegion up_to_range(const OfdmConfig& config, double max_range_m);
    /// Default for the standard scenario: 80 m scene edge plus 10 m margin.
    static SearchRegion standard(const OfdmConfig& config) { return up_to_range(config, 90.0); }
};

/// Per(n, m) = |X(n, m)|^2 / (N M), X as in SpectrumEngine::transform.
RangeDopplerMap compute_map(const ComplexFrame& frame, const WindowMatrix& window, const OfdmConfig& config);
/// Unwindowed (rectangular) map.
RangeDopplerMap compute_map(const ComplexFrame& frame, const OfdmConfig& config);

/// range = c n / (2 df N_Per); velocity from the signed Doppler bin
/// (m for m < M_Per/2, else m - M_Per).
struct PhysicalPoint {
    double range_m;
    double velocity_mps;
};
PhysicalPoint bin_to_physical(std::size_t n, std::size_t m, const OfdmConfig& config);

/// Global argmax over the region; ties go to the smallest n, then smallest m.
PeakEstimate find_peak(const RangeDopplerMap& map, const SearchRegion& region);

/// Same search on a raw power grid (used by the detectors on their working
/// copies).
PeakEstimate find_peak(const Matrix<double>& power, const SearchRegion& region, const OfdmConfig& config);

/// Text grid for plotting:
///   # dualwin-map v1
///   # n_per <N_Per> m_per <M_Per>
///   # range_bin_m <dr> velocity_bin_mps <dv> window <tag>
/// then N_Per lines of M_Per space-separated values, delay-axis-major
/// (line n holds Per(n, 0..M_Per-1)).
void write_map(std::ostream& os, const RangeDopplerMap& map);
RangeDopplerMap read_map(std::istream& is, const OfdmConfig& config);

}  // namespace dualwin
