#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dualwin/matrix.hpp"
#include "dualwin/ofdm_config.hpp"
#include "dualwin/periodogram.hpp"
#include "dualwin/windows.hpp"

namespace dualwin {

enum class DetectorTag { bstc_resolution, bstc_sidelobe, cstc, adaptive };

std::string to_string(DetectorTag tag);
DetectorTag parse_detector_tag(const std::string& text);

struct DetectionResult {
    std::vector<PeakEstimate> estimates;  // exactly H, descending power
    DetectorTag tag = DetectorTag::cstc;
    double runtime_s = 0.0;
    /// CSTC only: initial map maximum and the maximum of the map computed
    /// from the final residual frame. Zero for BSTC.
    double initial_peak_power = 0.0;
    double residual_peak_power = 0.0;
};

struct DetectorOptions {
    SearchRegion region{};
    /// Binary mask extends to the first bin at or below -mask_level_db on
    /// each axis of the window's own spectrum (or its first null).
    double mask_level_db = 12.0;

    static DetectorOptions standard(const OfdmConfig& config) {
        return DetectorOptions{SearchRegion::standard(config), 12.0};
    }
};

/// Per-axis BSTC mask halfwidths in periodogram bins for a window matrix.
std::pair<std::size_t, std::size_t> bstc_mask_halfwidths(const WindowMatrix& window, const OfdmConfig& config,
                                                         double mask_level_db);

/// Binary successive target cancellation: one windowed map, then H rounds of
/// peak picking and zeroing a (2 w_n + 1) x (2 w_m + 1) rectangle around the
/// peak (circular in Doppler, clipped in delay). Throws
/// Error(detector_degenerate) if the region runs out of unmasked bins.
DetectionResult bstc(const ComplexFrame& frame, const WindowMatrix& window, std::size_t targets,
                     const OfdmConfig& config, const DetectorOptions& options,
                     DetectorTag tag = DetectorTag::bstc_resolution);

/// Coherent successive target cancellation on the unwindowed frame: per
/// round, map, peak, complex amplitude a = X(n, m) / (N M), subtract
/// a e^{+j 2 pi l m / M_Per} e^{-j 2 pi k n / N_Per} from the working frame.
/// A final map of the residual is computed (the stopping test an ideal CFAR
/// would run) and its maximum reported in residual_peak_power.
DetectionResult cstc(const ComplexFrame& frame, std::size_t targets, const OfdmConfig& config,
                     const DetectorOptions& options);

/// Wall-clock seconds of fn() on a monotonic clock.
template <class F>
double measure_runtime(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    std::forward<F>(fn)();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace dualwin
