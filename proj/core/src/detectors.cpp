#include "dualwin/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "dualwin/error.hpp"
#include "dualwin/fft.hpp"

namespace dualwin {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::size_t cached_extent(const WindowKind& kind, std::size_t length, std::size_t nfft, double level_db) {
    using Key = std::tuple<int, double, std::size_t, std::size_t, double>;
    static std::mutex mutex;
    static std::map<Key, std::size_t> cache;
    const Key key{static_cast<int>(kind.family), kind.attenuation_db, length, nfft, level_db};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    if (nfft % length != 0)
        fail(ErrorCode::invalid_argument, "BSTC mask: transform size must be a multiple of the frame size");
    const std::size_t extent = mainlobe_extent_bins(kind, length, nfft / length, level_db);
    std::lock_guard lock(mutex);
    cache.emplace(key, extent);
    return extent;
}

void check_targets(std::size_t targets, const SearchRegion& region, const OfdmConfig& config) {
    if (targets < 1) fail(ErrorCode::invalid_argument, "detector: target count must be >= 1");
    if (region.n_max >= config.n_per) fail(ErrorCode::invalid_argument, "detector: search region outside the map");
    if (targets > (region.n_max + 1) * config.m_per)
        fail(ErrorCode::detector_degenerate, "detector: more targets than searchable bins");
}

double region_max(const Matrix<double>& power, const SearchRegion& region) {
    double best = 0.0;
    for (std::size_t n = 0; n <= region.n_max; ++n)
        for (double v : power.row(n)) best = std::max(best, v);
    return best;
}

void sort_by_power(std::vector<PeakEstimate>& est) {
    std::stable_sort(est.begin(), est.end(), [](const auto& a, const auto& b) { return a.power > b.power; });
}

}  // namespace

std::string to_string(DetectorTag tag) {
    switch (tag) {
        case DetectorTag::bstc_resolution: return "bstc_resolution";
        case DetectorTag::bstc_sidelobe: return "bstc_sidelobe";
        case DetectorTag::cstc: return "cstc";
        case DetectorTag::adaptive: return "adaptive";
    }
    return "unknown";
}

DetectorTag parse_detector_tag(const std::string& text) {
    for (auto t : {DetectorTag::bstc_resolution, DetectorTag::bstc_sidelobe, DetectorTag::cstc, DetectorTag::adaptive})
        if (to_string(t) == text) return t;
    fail(ErrorCode::invalid_argument, "unknown strategy '" + text + "'");
}

std::pair<std::size_t, std::size_t> bstc_mask_halfwidths(const WindowMatrix& window, const OfdmConfig& config,
                                                         double mask_level_db) {
    return {cached_extent(window.kind_k, config.n_subcarriers, config.n_per, mask_level_db),
            cached_extent(window.kind_l, config.n_symbols, config.m_per, mask_level_db)};
}

DetectionResult bstc(const ComplexFrame& frame, const WindowMatrix& window, std::size_t targets,
                     const OfdmConfig& config, const DetectorOptions& options, DetectorTag tag) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& region = options.region;
    check_targets(targets, region, config);
    const auto [half_n, half_m] = bstc_mask_halfwidths(window, config, options.mask_level_db);

    auto map = compute_map(frame, window, config);
    auto& power = map.power;
    const std::size_t rows = region.n_max + 1;
    const std::size_t cols = config.m_per;
    std::vector<char> masked(rows * cols, 0);
    std::size_t unmasked = rows * cols;

    DetectionResult out;
    out.tag = tag;
    out.estimates.reserve(targets);
    for (std::size_t h = 0; h < targets; ++h) {
        if (unmasked == 0)
            fail(ErrorCode::detector_degenerate, "BSTC: mask covers the whole search region");
        auto peak = find_peak(power, region, config);
        if (peak.power == 0.0 && masked[peak.n * cols + peak.m]) {
            // All-zero remainder: fall back to the first unmasked bin so the
            // estimate never repeats a cancelled cell.
            const auto it = std::find(masked.begin(), masked.end(), 0);
            const auto idx = static_cast<std::size_t>(it - masked.begin());
            const auto p = bin_to_physical(idx / cols, idx % cols, config);
            peak = PeakEstimate{idx / cols, idx % cols, 0.0, p.range_m, p.velocity_mps};
        }
        out.estimates.push_back(peak);

        const std::size_t n_lo = peak.n >= half_n ? peak.n - half_n : 0;
        const std::size_t n_hi = std::min(peak.n + half_n, region.n_max);
        const std::size_t span_m = std::min(2 * half_m + 1, cols);
        for (std::size_t n = n_lo; n <= n_hi; ++n) {
            auto row = power.row(n);
            for (std::size_t j = 0; j < span_m; ++j) {
                const std::size_t m = (peak.m + cols - half_m % cols + j) % cols;
                row[m] = 0.0;
                char& flag = masked[n * cols + m];
                if (!flag) {
                    flag = 1;
                    --unmasked;
                }
            }
        }
    }
    sort_by_power(out.estimates);
    out.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

DetectionResult cstc(const ComplexFrame& frame, std::size_t targets, const OfdmConfig& config,
                     const DetectorOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& region = options.region;
    check_targets(targets, region, config);

    const std::size_t n = config.n_subcarriers;
    const std::size_t m = config.n_symbols;
    const double nm = static_cast<double>(n * m);
    const double scale = 1.0 / nm;

    ComplexFrame work = frame;
    work.role = FrameRole::normalized;
    std::vector<cdouble> delay_phasor(n);
    std::vector<cdouble> doppler_phasor(m);
    Matrix<double> power(config.n_per, config.m_per);

    auto engine = SpectrumEngine::lease(config);
    auto refresh_map = [&] {
        const auto x = engine->transform(work.data, nullptr);
        auto out = power.flat();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(x[i]) * scale;
        return x;
    };

    DetectionResult out;
    out.tag = DetectorTag::cstc;
    out.estimates.reserve(targets);
    for (std::size_t h = 0; h < targets; ++h) {
        const auto x = refresh_map();
        if (h == 0) out.initial_peak_power = region_max(power, region);
        const auto peak = find_peak(power, region, config);
        out.estimates.push_back(peak);

        const cdouble amp = x[peak.n * config.m_per + peak.m] * scale;
        const double fn = static_cast<double>(peak.n) / static_cast<double>(config.n_per);
        const double fm = static_cast<double>(peak.m) / static_cast<double>(config.m_per);
        for (std::size_t k = 0; k < n; ++k)
            delay_phasor[k] = amp * std::polar(1.0, -two_pi * fn * static_cast<double>(k));
        for (std::size_t l = 0; l < m; ++l)
            doppler_phasor[l] = std::polar(1.0, two_pi * fm * static_cast<double>(l));
        for (std::size_t k = 0; k < n; ++k) {
            auto row = work.data.row(k);
            const cdouble a = delay_phasor[k];
            for (std::size_t l = 0; l < m; ++l) row[l] -= a * doppler_phasor[l];
        }
    }
    refresh_map();
    out.residual_peak_power = region_max(power, region);

    sort_by_power(out.estimates);
    out.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace dualwin
