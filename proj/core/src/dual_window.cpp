#include "dualwin/dual_window.hpp"

#include <algorithm>
#include <future>
#include <string>

#include "dualwin/assignment.hpp"
#include "dualwin/error.hpp"

namespace dualwin {

namespace {

void check_roles(const WindowKind& res, const WindowKind& side, std::size_t length, std::size_t nfft) {
    const std::size_t os = std::max<std::size_t>(4, nfft / length);
    const auto pr = profile_window(res, length, os);
    const auto ps = profile_window(side, length, os);
    if (!(pr.mainlobe_halfwidth_bins < ps.mainlobe_halfwidth_bins && pr.psl_db < ps.psl_db))
        fail(ErrorCode::invalid_argument, "dual-window: '" + res.tag() + "' is not resolution-optimized relative to '" +
                                              side.tag() + "'");
}

}  // namespace

std::vector<RangeVelocity> to_points(const std::vector<PeakEstimate>& estimates) {
    std::vector<RangeVelocity> pts;
    pts.reserve(estimates.size());
    for (const auto& e : estimates) pts.push_back({e.range_m, e.velocity_mps});
    return pts;
}

MatchOutcome match_lists(const std::vector<PeakEstimate>& res, const std::vector<PeakEstimate>& side, double epsilon) {
    MatchOutcome out;
    out.count_res = res.size();
    out.count_side = side.size();
    if (res.size() != side.size()) return out;

    const auto a = to_points(res);
    const auto b = to_points(side);
    out.pairing = assign_pairs(a, b);
    out.d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) out.d = std::max(out.d, squared_distance(a[i], b[out.pairing[i]]));
    out.matched = out.d <= epsilon;
    return out;
}

MatchOutcome match_lists(const DetectionResult& res, const DetectionResult& side, double epsilon) {
    return match_lists(res.estimates, side.estimates, epsilon);
}

DualWindowDetector::DualWindowDetector(const OfdmConfig& config, const WindowKind& resolution_window,
                                       const WindowKind& sidelobe_window, double epsilon, DetectorOptions options)
    : DualWindowDetector(config, window_matrix(resolution_window, config), window_matrix(sidelobe_window, config),
                         epsilon, options) {}

DualWindowDetector::DualWindowDetector(const OfdmConfig& config, WindowMatrix resolution_window,
                                       WindowMatrix sidelobe_window, double epsilon, DetectorOptions options)
    : config_(config),
      win_res_(std::move(resolution_window)),
      win_side_(std::move(sidelobe_window)),
      epsilon_(epsilon),
      options_(options) {
    config_.validate();
    if (!(epsilon_ >= 0.0)) fail(ErrorCode::invalid_argument, "dual-window: epsilon must be >= 0");
    check_roles(win_res_.kind_k, win_side_.kind_k, config_.n_subcarriers, config_.n_per);
    check_roles(win_res_.kind_l, win_side_.kind_l, config_.n_symbols, config_.m_per);
}

AdaptiveResult DualWindowDetector::resolve(const ComplexFrame& frame, std::size_t targets, DetectionResult res,
                                           DetectionResult side, const DetectionResult* precomputed_cstc) const {
    AdaptiveResult out;
    out.match = match_lists(res, side, epsilon_);
    out.runtime_res_s = res.runtime_s;
    out.runtime_side_s = side.runtime_s;
    if (out.match.matched) {
        out.mode = AdaptiveMode::converged;
        out.detection = res;
    } else {
        out.mode = AdaptiveMode::fallback;
        out.detection = precomputed_cstc ? *precomputed_cstc : cstc(frame, targets, config_, options_);
        out.runtime_cstc_s = out.detection.runtime_s;
    }
    // Matching cost is not charged.
    out.total_runtime_s = out.runtime_res_s + out.runtime_side_s + out.runtime_cstc_s;
    out.detection.tag = DetectorTag::adaptive;
    out.detection.runtime_s = out.total_runtime_s;
    out.res = std::move(res);
    out.side = std::move(side);
    return out;
}

AdaptiveResult DualWindowDetector::detect(const ComplexFrame& frame, std::size_t targets,
                                          ExecutionPolicy policy) const {
    DetectionResult res, side;
    if (policy == ExecutionPolicy::concurrent) {
        auto fut = std::async(std::launch::async, [&] {
            return bstc(frame, win_side_, targets, config_, options_, DetectorTag::bstc_sidelobe);
        });
        res = bstc(frame, win_res_, targets, config_, options_, DetectorTag::bstc_resolution);
        side = fut.get();
    } else {
        res = bstc(frame, win_res_, targets, config_, options_, DetectorTag::bstc_resolution);
        side = bstc(frame, win_side_, targets, config_, options_, DetectorTag::bstc_sidelobe);
    }
    return resolve(frame, targets, std::move(res), std::move(side));
}

AdaptiveResult detect_adaptive(const ComplexFrame& frame, std::size_t targets, const OfdmConfig& config,
                               const WindowMatrix& win_res, const WindowMatrix& win_side, double epsilon,
                               const DetectorOptions& options, ExecutionPolicy policy) {
    return DualWindowDetector(config, win_res, win_side, epsilon, options).detect(frame, targets, policy);
}

}  // namespace dualwin
