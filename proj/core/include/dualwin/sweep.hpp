#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dualwin/channel.hpp"
#include "dualwin/detectors.hpp"
#include "dualwin/dual_window.hpp"
#include "dualwin/ofdm_config.hpp"
#include "dualwin/windows.hpp"

namespace dualwin {

struct Tolerance {
    double range_m = 5.0;
    double velocity_mps = 5.0;
};

/// Truth-to-estimate pairing by squared-distance assignment; a pair is a hit
/// when both |d_range| < tol.range_m and |d_velocity| < tol.velocity_mps.
std::size_t score_trial(const Scene& truth, const DetectionResult& detection, const Tolerance& tol = {});

inline const std::vector<DetectorTag>& all_strategies() {
    static const std::vector<DetectorTag> all{DetectorTag::bstc_resolution, DetectorTag::bstc_sidelobe,
                                              DetectorTag::cstc, DetectorTag::adaptive};
    return all;
}

struct SweepConfig {
    OfdmConfig ofdm = OfdmConfig::standard();
    ChannelModel channel{};
    SceneConstraints scene{};
    std::vector<double> snr_grid_db;
    std::size_t trials = 500;
    std::vector<DetectorTag> strategies = all_strategies();
    double epsilon = 10.0;
    std::uint64_t seed = 1;
    WindowKind resolution_window = WindowKind::rectangular();
    WindowKind sidelobe_window = WindowKind::dolph_chebyshev(80.0);
    DetectorOptions detector = DetectorOptions::standard(OfdmConfig::standard());
    Tolerance tolerance{};
    bool noiseless = false;
    /// 0: runtimes come from the statistics pass, which then runs serially.
    /// n > 0: a separate serial timing pass measures every detector call n
    /// times and keeps the median.
    std::size_t timing_repeats = 0;
    /// Trials per SNR point in the timing pass; 0 means all of them.
    std::size_t timing_trials = 0;
    /// Statistics-pass threads; 0 means hardware concurrency.
    std::size_t workers = 0;
    std::string output_path;

    /// Throws Error(invalid_argument): trials >= 1, grid non-empty and
    /// strictly increasing, strategies non-empty and unique.
    void validate() const;
    /// Requested strategies in canonical column order.
    std::vector<DetectorTag> ordered_strategies() const;
};

struct StrategySummary {
    double detection_probability = 0.0;
    double normalized_runtime = 0.0;  // mean runtime / mean CSTC runtime at this SNR
    double mean_runtime_s = 0.0;
    double median_runtime_s = 0.0;
    std::size_t hits = 0;
};

struct SweepRecord {
    double snr_db = 0.0;
    std::map<DetectorTag, StrategySummary> strategies;
    double fallback_rate = 0.0;  // NaN when adaptive was not run
    std::size_t trials = 0;
};

/// Everything one trial produced, handed to an optional observer.
struct TrialObservation {
    std::size_t snr_index = 0;
    std::size_t trial = 0;
    bool timing_pass = false;
    const Scene* truth = nullptr;
    std::map<DetectorTag, DetectionResult> results;
    std::map<DetectorTag, std::size_t> hits;  // statistics pass only
    std::optional<AdaptiveResult> adaptive;
};
using TrialObserver = std::function<void(const TrialObservation&)>;

/// Scene and normalized frame of one trial. Scene, symbols and the standard
/// normal noise draws depend only on (seed, trial), so every SNR point sees
/// the same realizations scaled to its noise level.
struct TrialInput {
    Scene scene;
    ComplexFrame frame;
};
TrialInput make_trial(const SweepConfig& cfg, double snr_db, std::size_t trial);

/// Observer calls are serialized but, in the parallel statistics pass, not in
/// trial order.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, const TrialObserver& observer = {});

/// Header: snr_db, {detprob_<tag>, runtime_<tag>} per strategy, fallback_rate,
/// trials. Locale-independent, 17 significant digits.
void write_csv(std::ostream& os, const std::vector<SweepRecord>& records, const std::vector<DetectorTag>& strategies);
void emit_csv(const std::vector<SweepRecord>& records, const std::vector<DetectorTag>& strategies,
              const std::string& path);
/// Parses write_csv output; runtime_<tag> is read back as normalized_runtime.
std::vector<SweepRecord> read_csv(std::istream& is);

}  // namespace dualwin
