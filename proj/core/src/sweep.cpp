#include "dualwin/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "dualwin/assignment.hpp"
#include "dualwin/error.hpp"
#include "dualwin/ofdm_frame.hpp"
#include "dualwin/rng.hpp"

namespace dualwin {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool wants(const SweepConfig& cfg, DetectorTag t) {
    return std::find(cfg.strategies.begin(), cfg.strategies.end(), t) != cfg.strategies.end();
}

// Per-trial outcome of the statistics pass, reduced in trial order.
struct TrialStats {
    std::map<DetectorTag, std::size_t> hits;
    std::map<DetectorTag, double> runtime_s;
    bool fallback = false;
};

struct Detectors {
    WindowMatrix win_res;
    WindowMatrix win_side;
    DualWindowDetector adaptive;

    explicit Detectors(const SweepConfig& cfg)
        : win_res(window_matrix(cfg.resolution_window, cfg.ofdm)),
          win_side(window_matrix(cfg.sidelobe_window, cfg.ofdm)),
          adaptive(cfg.ofdm, win_res, win_side, cfg.epsilon, cfg.detector) {}
};

}  // namespace

std::size_t score_trial(const Scene& truth, const DetectionResult& detection, const Tolerance& tol) {
    if (detection.estimates.size() != truth.size())
        fail(ErrorCode::invalid_argument, "score_trial: estimate count differs from the number of targets");
    std::vector<RangeVelocity> t;
    t.reserve(truth.size());
    for (const auto& tg : truth.targets) t.push_back({tg.range_m, tg.velocity_mps});
    const auto e = to_points(detection.estimates);
    const auto pairing = assign_pairs(t, e);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& est = e[pairing[i]];
        if (std::abs(t[i].range_m - est.range_m) < tol.range_m &&
            std::abs(t[i].velocity_mps - est.velocity_mps) < tol.velocity_mps)
            ++hits;
    }
    return hits;
}

void SweepConfig::validate() const {
    ofdm.validate();
    if (trials < 1) fail(ErrorCode::invalid_argument, "sweep: trials must be >= 1");
    if (snr_grid_db.empty()) fail(ErrorCode::invalid_argument, "sweep: SNR grid is empty");
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
        if (!std::isfinite(snr_grid_db[i])) fail(ErrorCode::invalid_argument, "sweep: SNR values must be finite");
        if (i > 0 && !(snr_grid_db[i] > snr_grid_db[i - 1]))
            fail(ErrorCode::invalid_argument, "sweep: SNR grid must be strictly increasing");
    }
    if (strategies.empty()) fail(ErrorCode::invalid_argument, "sweep: no strategies requested");
    if (std::set<DetectorTag>(strategies.begin(), strategies.end()).size() != strategies.size())
        fail(ErrorCode::invalid_argument, "sweep: duplicate strategy");
    if (!(epsilon >= 0.0)) fail(ErrorCode::invalid_argument, "sweep: epsilon must be >= 0");
    if (scene.count < 1) fail(ErrorCode::invalid_argument, "sweep: target count must be >= 1");
    resolution_window.validate();
    sidelobe_window.validate();
}

std::vector<DetectorTag> SweepConfig::ordered_strategies() const {
    std::vector<DetectorTag> out;
    for (auto t : all_strategies())
        if (wants(*this, t)) out.push_back(t);
    return out;
}

TrialInput make_trial(const SweepConfig& cfg, double snr_db, std::size_t trial) {
    const auto t = static_cast<std::uint64_t>(trial);
    TrialInput in;
    in.scene = sample_scene(cfg.ofdm, cfg.scene, derive_seed(cfg.seed, {stream::scene, t}));
    const auto ftx = generate_frame(cfg.ofdm, derive_seed(cfg.seed, {stream::frame, t}));
    std::optional<NoiseSpec> noise;
    if (!cfg.noiseless) noise = calibrate_noise(snr_db, cfg.ofdm, cfg.channel);
    const auto frx = synthesize_received(ftx, in.scene, noise, cfg.ofdm, derive_seed(cfg.seed, {stream::noise, t}),
                                         cfg.channel);
    in.frame = normalize(frx, ftx);
    return in;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, const TrialObserver& observer) {
    cfg.validate();
    const Detectors det(cfg);
    const std::size_t h = cfg.scene.count;
    const bool want_adaptive = wants(cfg, DetectorTag::adaptive);
    const bool inline_timing = cfg.timing_repeats == 0;
    std::size_t workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    if (inline_timing) workers = 1;
    std::mutex observer_mutex;

    // FFTW planning and the mask-extent cache fill on first use; keep both
    // out of every timed call.
    {
        const auto in = make_trial(cfg, cfg.snr_grid_db.front(), 0);
        (void)det.adaptive.detect(in.frame, h, ExecutionPolicy::serial);
        (void)cstc(in.frame, h, cfg.ofdm, cfg.detector);
    }

    std::vector<SweepRecord> records;
    for (std::size_t s = 0; s < cfg.snr_grid_db.size(); ++s) {
        const double snr = cfg.snr_grid_db[s];
        std::vector<TrialStats> stats(cfg.trials);

        auto run_trial = [&](std::size_t t) {
            const auto in = make_trial(cfg, snr, t);
            TrialObservation obs;
            obs.snr_index = s;
            obs.trial = t;
            obs.truth = &in.scene;

            std::optional<DetectionResult> res, side, cs;
            if (wants(cfg, DetectorTag::bstc_resolution) || want_adaptive)
                res = bstc(in.frame, det.win_res, h, cfg.ofdm, cfg.detector, DetectorTag::bstc_resolution);
            if (wants(cfg, DetectorTag::bstc_sidelobe) || want_adaptive)
                side = bstc(in.frame, det.win_side, h, cfg.ofdm, cfg.detector, DetectorTag::bstc_sidelobe);
            // CSTC is the runtime reference, so inline timing always runs it.
            if (wants(cfg, DetectorTag::cstc) || inline_timing) cs = cstc(in.frame, h, cfg.ofdm, cfg.detector);

            auto& st = stats[t];
            auto record = [&](DetectorTag tag, const DetectionResult& r) {
                st.runtime_s[tag] = r.runtime_s;
                if (wants(cfg, tag)) st.hits[tag] = score_trial(in.scene, r, cfg.tolerance);
                obs.results[tag] = r;
            };
            if (res) record(DetectorTag::bstc_resolution, *res);
            if (side) record(DetectorTag::bstc_sidelobe, *side);
            if (cs) record(DetectorTag::cstc, *cs);
            if (want_adaptive) {
                auto a = det.adaptive.resolve(in.frame, h, *res, *side, cs ? &*cs : nullptr);
                st.fallback = a.mode == AdaptiveMode::fallback;
                record(DetectorTag::adaptive, a.detection);
                obs.adaptive = std::move(a);
            }
            obs.hits = st.hits;
            if (observer) {
                std::lock_guard lock(observer_mutex);
                observer(obs);
            }
        };

        if (workers <= 1) {
            for (std::size_t t = 0; t < cfg.trials; ++t) run_trial(t);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::exception_ptr> errors(workers);
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t t = next++; t < cfg.trials; t = next++) run_trial(t);
                    } catch (...) {
                        errors[w] = std::current_exception();
                        next = cfg.trials;
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }

        SweepRecord rec;
        rec.snr_db = snr;
        rec.trials = cfg.trials;
        std::size_t fallbacks = 0;
        for (const auto& st : stats) fallbacks += st.fallback ? 1 : 0;
        rec.fallback_rate = want_adaptive ? static_cast<double>(fallbacks) / static_cast<double>(cfg.trials)
                                          : std::numeric_limits<double>::quiet_NaN();

        // Runtime samples per strategy, one per timed trial.
        std::map<DetectorTag, std::vector<double>> samples;
        if (inline_timing) {
            for (const auto& st : stats)
                for (const auto& [tag, rt] : st.runtime_s) samples[tag].push_back(rt);
        } else {
            const std::size_t n_timed = cfg.timing_trials ? std::min(cfg.timing_trials, cfg.trials) : cfg.trials;
            for (std::size_t t = 0; t < n_timed; ++t) {
                const auto in = make_trial(cfg, snr, t);
                TrialObservation obs;
                obs.snr_index = s;
                obs.trial = t;
                obs.timing_pass = true;
                obs.truth = &in.scene;
                std::map<DetectorTag, std::vector<double>> reps;
                for (std::size_t r = 0; r < cfg.timing_repeats; ++r) {
                    for (auto tag : all_strategies()) {
                        if (tag != DetectorTag::cstc && !wants(cfg, tag)) continue;
                        switch (tag) {
                            case DetectorTag::bstc_resolution:
                            case DetectorTag::bstc_sidelobe: {
                                const auto& w = tag == DetectorTag::bstc_resolution ? det.win_res : det.win_side;
                                auto out = bstc(in.frame, w, h, cfg.ofdm, cfg.detector, tag);
                                reps[tag].push_back(out.runtime_s);
                                obs.results[tag] = std::move(out);
                                break;
                            }
                            case DetectorTag::cstc: {
                                auto out = cstc(in.frame, h, cfg.ofdm, cfg.detector);
                                reps[tag].push_back(out.runtime_s);
                                obs.results[tag] = std::move(out);
                                break;
                            }
                            case DetectorTag::adaptive: {
                                auto out = det.adaptive.detect(in.frame, h, ExecutionPolicy::serial);
                                reps[tag].push_back(out.total_runtime_s);
                                obs.results[tag] = out.detection;
                                obs.adaptive = std::move(out);
                                break;
                            }
                        }
                    }
                    if (observer) observer(obs);
                }
                for (auto& [tag, v] : reps) samples[tag].push_back(median_of(v));
            }
        }

        const double cstc_mean = mean_of(samples[DetectorTag::cstc]);
        for (auto tag : cfg.ordered_strategies()) {
            StrategySummary sum;
            std::size_t hits = 0;
            for (const auto& st : stats) {
                auto it = st.hits.find(tag);
                if (it != st.hits.end()) hits += it->second;
            }
            sum.hits = hits;
            sum.detection_probability = static_cast<double>(hits) / static_cast<double>(h * cfg.trials);
            const auto& v = samples[tag];
            sum.mean_runtime_s = mean_of(v);
            sum.median_runtime_s = median_of(v);
            sum.normalized_runtime = tag == DetectorTag::cstc ? 1.0
                                     : cstc_mean > 0.0         ? sum.mean_runtime_s / cstc_mean
                                                               : 0.0;
            rec.strategies[tag] = sum;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace dualwin
