#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "dualwin/assignment.hpp"
#include "dualwin/detectors.hpp"
#include "dualwin/ofdm_config.hpp"
#include "dualwin/windows.hpp"

namespace dualwin {

/// Verdict of comparing the resolution-window and sidelobe-window lists.
struct MatchOutcome {
    bool matched = false;
    /// max over pairs of (d_range^2 + d_velocity^2), m^2 + (m/s)^2. Infinity
    /// when the counts differ (no pairing is attempted).
    double d = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pairing;  // pairing[i]: index in side list for res[i]
    std::size_t count_res = 0;
    std::size_t count_side = 0;
};

std::vector<RangeVelocity> to_points(const std::vector<PeakEstimate>& estimates);

MatchOutcome match_lists(const std::vector<PeakEstimate>& res, const std::vector<PeakEstimate>& side, double epsilon);
MatchOutcome match_lists(const DetectionResult& res, const DetectionResult& side, double epsilon);

enum class AdaptiveMode { converged, fallback };

struct AdaptiveResult {
    DetectionResult detection;  // tag = adaptive; estimates from res or cstc
    AdaptiveMode mode = AdaptiveMode::converged;
    MatchOutcome match;
    double total_runtime_s = 0.0;
    double runtime_res_s = 0.0;
    double runtime_side_s = 0.0;
    double runtime_cstc_s = 0.0;  // zero when converged
    DetectionResult res;
    DetectionResult side;
};

enum class ExecutionPolicy {
    serial,     // res then side on the calling thread; required for timing
    concurrent, // the two BSTC runs on separate threads
};

/// Dual-window adaptive detector. The first window must be the
/// resolution-optimized one: at construction its profile must show a narrower
/// mainlobe and a lower PSL than the second window's, on both axes.
class DualWindowDetector {
public:
    DualWindowDetector(const OfdmConfig& config, const WindowKind& resolution_window,
                       const WindowKind& sidelobe_window, double epsilon, DetectorOptions options);
    DualWindowDetector(const OfdmConfig& config, WindowMatrix resolution_window, WindowMatrix sidelobe_window,
                       double epsilon, DetectorOptions options);

    AdaptiveResult detect(const ComplexFrame& frame, std::size_t targets,
                          ExecutionPolicy policy = ExecutionPolicy::serial) const;

    /// Matching step applied to two already-computed BSTC results; runs CSTC
    /// only on divergence, unless a CSTC result for the same frame is supplied.
    AdaptiveResult resolve(const ComplexFrame& frame, std::size_t targets, DetectionResult res,
                           DetectionResult side, const DetectionResult* precomputed_cstc = nullptr) const;

    const WindowMatrix& resolution_window() const noexcept { return win_res_; }
    const WindowMatrix& sidelobe_window() const noexcept { return win_side_; }
    double epsilon() const noexcept { return epsilon_; }
    const DetectorOptions& options() const noexcept { return options_; }

private:
    OfdmConfig config_;
    WindowMatrix win_res_;
    WindowMatrix win_side_;
    double epsilon_;
    DetectorOptions options_;
};

/// One-shot form of DualWindowDetector::detect.
AdaptiveResult detect_adaptive(const ComplexFrame& frame, std::size_t targets, const OfdmConfig& config,
                               const WindowMatrix& win_res, const WindowMatrix& win_side, double epsilon,
                               const DetectorOptions& options, ExecutionPolicy policy = ExecutionPolicy::serial);

}  // namespace dualwin
