#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "dualwin/error.hpp"
#include "dualwin/sweep.hpp"

using namespace dualwin;

namespace {

DetectionResult estimates_of(const std::vector<std::pair<double, double>>& pts) {
    DetectionResult d;
    for (auto [r, v] : pts) {
        PeakEstimate p;
        p.range_m = r;
        p.velocity_mps = v;
        d.estimates.push_back(p);
    }
    return d;
}

Scene truth3() { return Scene{{Target{20, 10}, Target{45, -30}, Target{70, 60}}}; }

SweepConfig tiny_config() {
    SweepConfig c;
    c.snr_grid_db = {-20.0, 0.0};
    c.trials = 4;
    return c;
}

}  // namespace

TEST(ScoreTrial, ExactEstimatesHitEveryTarget) {
    EXPECT_EQ(score_trial(truth3(), estimates_of({{20, 10}, {45, -30}, {70, 60}})), 3u);
}

TEST(ScoreTrial, SixMetreMissCostsOneHit) {
    EXPECT_EQ(score_trial(truth3(), estimates_of({{26, 10}, {45, -30}, {70, 60}})), 2u);
    // The tolerance is strict on both axes.
    EXPECT_EQ(score_trial(truth3(), estimates_of({{25, 10}, {45, -35}, {70, 60}})), 1u);
    EXPECT_EQ(score_trial(truth3(), estimates_of({{24.9, 14.9}, {45, -30}, {70, 60}})), 3u);
}

TEST(ScoreTrial, PermutationIsResolvedByAssignment) {
    EXPECT_EQ(score_trial(truth3(), estimates_of({{70, 60}, {20, 10}, {45, -30}})), 3u);
}

TEST(ScoreTrial, RejectsWrongEstimateCount) {
    EXPECT_THROW((void)score_trial(truth3(), estimates_of({{20, 10}})), Error);
}

TEST(SweepConfig, ValidationErrors) {
    auto expect_bad = [](const SweepConfig& c) {
        try {
            c.validate();
            FAIL() << "expected invalid_argument";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
        }
    };
    auto c = tiny_config();
    EXPECT_NO_THROW(c.validate());
    c.trials = 0;
    expect_bad(c);
    c = tiny_config();
    c.snr_grid_db.clear();
    expect_bad(c);
    c = tiny_config();
    c.snr_grid_db = {0.0, 0.0};
    expect_bad(c);
    c.snr_grid_db = {5.0, 0.0};
    expect_bad(c);
    c = tiny_config();
    c.strategies = {DetectorTag::cstc, DetectorTag::cstc};
    expect_bad(c);
    c.strategies.clear();
    expect_bad(c);
    c = tiny_config();
    c.epsilon = -1;
    expect_bad(c);
}

TEST(SweepConfig, OrderedStrategiesUseCanonicalOrder) {
    auto c = tiny_config();
    c.strategies = {DetectorTag::adaptive, DetectorTag::bstc_resolution};
    EXPECT_EQ(c.ordered_strategies(), (std::vector<DetectorTag>{DetectorTag::bstc_resolution, DetectorTag::adaptive}));
}

TEST(RunSweep, NoiselessSingleTargetIsPerfect) {
    SweepConfig c;
    c.snr_grid_db = {0.0};
    c.trials = 1;
    c.noiseless = true;
    c.scene.count = 1;
    const auto recs = run_sweep(c);
    ASSERT_EQ(recs.size(), 1u);
    for (auto t : all_strategies()) EXPECT_EQ(recs[0].strategies.at(t).detection_probability, 1.0) << to_string(t);
    EXPECT_EQ(recs[0].fallback_rate, 0.0);
    EXPECT_EQ(recs[0].trials, 1u);
}

TEST(RunSweep, RecordsAreWellFormed) {
    const auto recs = run_sweep(tiny_config());
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0].snr_db, -20.0);
    EXPECT_EQ(recs[1].snr_db, 0.0);
    for (const auto& r : recs) {
        EXPECT_EQ(r.strategies.at(DetectorTag::cstc).normalized_runtime, 1.0);
        for (const auto& [tag, s] : r.strategies) {
            EXPECT_GE(s.detection_probability, 0.0);
            EXPECT_LE(s.detection_probability, 1.0);
            EXPECT_GT(s.mean_runtime_s, 0.0);
        }
        EXPECT_GE(r.fallback_rate, 0.0);
        EXPECT_LE(r.fallback_rate, 1.0);
    }
}

TEST(RunSweep, EstimatesAreDeterministicAcrossWorkerCounts) {
    using Key = std::pair<std::size_t, std::size_t>;
    auto collect = [](std::size_t workers) {
        auto c = tiny_config();
        c.workers = workers;
        c.timing_repeats = 1;
        c.timing_trials = 1;
        std::map<Key, std::vector<std::size_t>> bins;
        std::mutex mu;
        const auto recs = run_sweep(c, [&](const TrialObservation& o) {
            if (o.timing_pass) return;
            std::lock_guard lock(mu);
            auto& v = bins[{o.snr_index, o.trial}];
            for (const auto& [tag, r] : o.results)
                for (const auto& e : r.estimates) {
                    v.push_back(e.n);
                    v.push_back(e.m);
                }
        });
        std::vector<double> probs;
        for (const auto& r : recs)
            for (const auto& [t, s] : r.strategies) probs.push_back(s.detection_probability);
        return std::make_pair(bins, probs);
    };
    const auto a = collect(1), b = collect(3);
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
    EXPECT_EQ(a.first.size(), 8u);
}

TEST(RunSweep, StrategiesShareTheTrialFrame) {
    auto c = tiny_config();
    c.snr_grid_db = {10.0};
    std::vector<const Scene*> truths;
    std::size_t calls = 0;
    run_sweep(c, [&](const TrialObservation& o) {
        ++calls;
        EXPECT_EQ(o.results.size(), 4u);
        ASSERT_TRUE(o.adaptive.has_value());
        const auto& a = *o.adaptive;
        // The adaptive run consumed the same BSTC results the sweep scored.
        EXPECT_EQ(a.res.estimates.size(), o.results.at(DetectorTag::bstc_resolution).estimates.size());
        for (std::size_t i = 0; i < a.res.estimates.size(); ++i)
            EXPECT_EQ(a.res.estimates[i].n, o.results.at(DetectorTag::bstc_resolution).estimates[i].n);
        EXPECT_DOUBLE_EQ(a.total_runtime_s, a.runtime_res_s + a.runtime_side_s +
                                                (a.mode == AdaptiveMode::fallback ? a.runtime_cstc_s : 0.0));
    });
    EXPECT_EQ(calls, 4u);
}

TEST(RunSweep, SubsetOfStrategies) {
    auto c = tiny_config();
    c.strategies = {DetectorTag::bstc_sidelobe};
    const auto recs = run_sweep(c);
    EXPECT_EQ(recs[0].strategies.size(), 1u);
    EXPECT_TRUE(std::isnan(recs[0].fallback_rate));
    EXPECT_GT(recs[0].strategies.at(DetectorTag::bstc_sidelobe).normalized_runtime, 0.0);
}

TEST(RunSweep, CommonRandomNumbersAcrossSnr) {
    auto c = tiny_config();
    std::map<std::size_t, std::vector<double>> ranges;
    run_sweep(c, [&](const TrialObservation& o) {
        if (o.trial == 2) ranges[o.snr_index].push_back(o.truth->targets[0].range_m);
    });
    ASSERT_EQ(ranges.size(), 2u);
    EXPECT_EQ(ranges[0], ranges[1]);
}

TEST(Csv, SchemaHasOneRowPerRecord) {
    SweepRecord r;
    r.snr_db = -5.5;
    r.trials = 500;
    r.fallback_rate = 0.25;
    for (auto t : all_strategies()) r.strategies[t] = StrategySummary{0.5, 0.75};
    std::ostringstream os;
    write_csv(os, {r}, all_strategies());
    std::istringstream is(os.str());
    std::string header, row, extra;
    std::getline(is, header);
    std::getline(is, row);
    EXPECT_FALSE(std::getline(is, extra));
    EXPECT_EQ(header,
              "snr_db,detprob_bstc_resolution,runtime_bstc_resolution,detprob_bstc_sidelobe,runtime_bstc_sidelobe,"
              "detprob_cstc,runtime_cstc,detprob_adaptive,runtime_adaptive,fallback_rate,trials");
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 10);
    EXPECT_EQ(row.substr(0, 5), "-5.5,");
}

TEST(Csv, RoundTripIsExact) {
    auto c = tiny_config();
    const auto recs = run_sweep(c);
    std::stringstream ss;
    write_csv(ss, recs, c.ordered_strategies());
    const auto back = read_csv(ss);
    ASSERT_EQ(back.size(), recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(back[i].snr_db, recs[i].snr_db);
        EXPECT_EQ(back[i].trials, recs[i].trials);
        EXPECT_EQ(back[i].fallback_rate, recs[i].fallback_rate);
        for (const auto& [t, s] : recs[i].strategies) {
            EXPECT_EQ(back[i].strategies.at(t).detection_probability, s.detection_probability);
            EXPECT_EQ(back[i].strategies.at(t).normalized_runtime, s.normalized_runtime);
        }
    }
}

TEST(Csv, NanFallbackRoundTrips) {
    SweepRecord r;
    r.trials = 3;
    r.fallback_rate = std::numeric_limits<double>::quiet_NaN();
    r.strategies[DetectorTag::cstc] = StrategySummary{1.0, 1.0};
    std::stringstream ss;
    write_csv(ss, {r}, {DetectorTag::cstc});
    const auto back = read_csv(ss);
    EXPECT_TRUE(std::isnan(back.at(0).fallback_rate));
}

TEST(Csv, ErrorPaths) {
    std::istringstream bad_header("a,b\n");
    EXPECT_THROW((void)read_csv(bad_header), Error);
    std::istringstream bad_cell("snr_db,detprob_cstc,runtime_cstc,fallback_rate,trials\n0,x,1,0,1\n");
    EXPECT_THROW((void)read_csv(bad_cell), Error);
    std::istringstream short_row("snr_db,detprob_cstc,runtime_cstc,fallback_rate,trials\n0,1,1\n");
    EXPECT_THROW((void)read_csv(short_row), Error);
    try {
        emit_csv({}, all_strategies(), "/nonexistent-dir/out.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::io_failure);
    }
}
