#include "dualwin/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dualwin/error.hpp"
#include "dualwin/rng.hpp"

namespace dualwin {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double echo_amplitude(double range_m, double rcs_m2, const OfdmConfig& config, const ChannelModel& model) {
    const double four_pi_cubed = std::pow(4.0 * std::numbers::pi, 3);
    const double k = speed_of_light * speed_of_light * rcs_m2 / (four_pi_cubed * config.carrier_hz * config.carrier_hz);
    const double d_ref = model.reference_range_m;
    // Radar equation with R^4 replaced by d_ref^4 (R/d_ref)^(2p).
    return std::sqrt(k) / (d_ref * d_ref * std::pow(range_m / d_ref, model.amplitude_exponent));
}

}  // namespace

TargetPhysicals target_physicals(const Target& t, const OfdmConfig& config, const ChannelModel& model) {
    if (!(t.range_m > 0.0)) fail(ErrorCode::scene_invalid, "target range must be positive");
    if (!(t.rcs_m2 > 0.0)) fail(ErrorCode::scene_invalid, "target RCS must be positive");
    if (!(t.phase_rad >= 0.0 && t.phase_rad < two_pi)) fail(ErrorCode::scene_invalid, "target phase outside [0, 2pi)");
    const double tau = 2.0 * t.range_m / speed_of_light;
    if (!(tau < config.cyclic_prefix_s()))
        fail(ErrorCode::scene_invalid, "target at " + std::to_string(t.range_m) +
                                           " m has a delay beyond the cyclic prefix");
    return TargetPhysicals{
        echo_amplitude(t.range_m, t.rcs_m2, config, model),
        tau,
        2.0 * t.velocity_mps * config.carrier_hz / speed_of_light,
    };
}

void validate_scene(const Scene& scene, const OfdmConfig& config) {
    for (const auto& t : scene.targets) (void)target_physicals(t, config);
}

Matrix<cdouble> draw_noise(const OfdmConfig& config, const NoiseSpec& noise, std::uint64_t seed) {
    if (!(noise.variance > 0.0)) fail(ErrorCode::invalid_argument, "noise variance must be positive");
    Rng rng(seed);
    const double sigma = std::sqrt(noise.variance / 2.0);
    Matrix<cdouble> z(config.n_subcarriers, config.n_symbols);
    for (auto& v : z.flat()) {
        const double re = rng.normal();
        const double im = rng.normal();
        v = cdouble(sigma * re, sigma * im);
    }
    return z;
}

ComplexFrame synthesize_received(const ComplexFrame& ftx, const Scene& scene,
                                 const std::optional<NoiseSpec>& noise, const OfdmConfig& config,
                                 std::uint64_t noise_seed, const ChannelModel& model) {
    const std::size_t n = config.n_subcarriers;
    const std::size_t m = config.n_symbols;
    if (ftx.data.rows() != n || ftx.data.cols() != m)
        fail(ErrorCode::invalid_argument, "synthesize_received: frame dimensions do not match config");

    ComplexFrame rx{FrameRole::received, Matrix<cdouble>(n, m)};
    std::vector<cdouble> delay_phasor(n);
    std::vector<cdouble> doppler_phasor(m);

    for (const auto& t : scene.targets) {
        const auto phys = target_physicals(t, config, model);
        const double phi = t.phase_rad - two_pi * config.carrier_hz * phys.delay_s;
        const cdouble gain = std::polar(phys.amplitude, phi);
        for (std::size_t k = 0; k < n; ++k)
            delay_phasor[k] = std::polar(1.0, -two_pi * phys.delay_s * static_cast<double>(k) * config.subcarrier_spacing_hz);
        for (std::size_t l = 0; l < m; ++l)
            doppler_phasor[l] = std::polar(1.0, two_pi * config.symbol_duration_s * phys.doppler_hz * static_cast<double>(l));

        for (std::size_t k = 0; k < n; ++k) {
            const cdouble row_gain = gain * delay_phasor[k];
            auto out = rx.data.row(k);
            auto in = ftx.data.row(k);
            for (std::size_t l = 0; l < m; ++l) out[l] += row_gain * doppler_phasor[l] * in[l];
        }
    }

    if (noise) {
        const auto z = draw_noise(config, *noise, noise_seed);
        auto out = rx.data.flat();
        auto zn = z.flat();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += zn[i];
    }
    return rx;
}

ComplexFrame normalize(const ComplexFrame& frx, const ComplexFrame& ftx) {
    if (frx.data.rows() != ftx.data.rows() || frx.data.cols() != ftx.data.cols())
        fail(ErrorCode::invalid_argument, "normalize: frame dimensions differ");
    ComplexFrame f{FrameRole::normalized, Matrix<cdouble>(frx.data.rows(), frx.data.cols())};
    auto out = f.data.flat();
    auto rx = frx.data.flat();
    auto tx = ftx.data.flat();
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (tx[i] == cdouble{}) fail(ErrorCode::internal_invariant, "normalize: zero transmitted symbol");
        out[i] = rx[i] / tx[i];
    }
    return f;
}

NoiseSpec calibrate_noise(double snr_db, const OfdmConfig& config, const ChannelModel& model) {
    if (!std::isfinite(snr_db)) fail(ErrorCode::invalid_argument, "calibrate_noise: SNR must be finite");
    const double b_ref = echo_amplitude(model.reference_range_m, model.reference_rcs_m2, config, model);
    return NoiseSpec{b_ref * b_ref / std::pow(10.0, snr_db / 10.0), snr_db};
}

bool SceneConstraints::separated(const Target& a, const Target& b) const noexcept {
    const bool range_ok = std::abs(a.range_m - b.range_m) >= min_range_sep_m;
    const bool velocity_ok = std::abs(a.velocity_mps - b.velocity_mps) >= min_velocity_sep_mps;
    return separation == SeparationRule::both_axes ? (range_ok && velocity_ok) : (range_ok || velocity_ok);
}

Scene sample_scene(const OfdmConfig& config, const SceneConstraints& c, std::uint64_t seed) {
    if (!(c.range_min_m > 0.0 && c.range_max_m >= c.range_min_m && c.velocity_max_mps >= c.velocity_min_mps))
        fail(ErrorCode::invalid_argument, "sample_scene: malformed bounds");
    Rng rng(seed);
    Scene scene;
    scene.targets.reserve(c.count);
    std::size_t attempts = 0;
    std::size_t misses = 0;
    while (scene.targets.size() < c.count) {
        if (++attempts > c.max_attempts)
            fail(ErrorCode::sampler_exhausted, "sample_scene: no valid scene after " +
                                                   std::to_string(c.max_attempts) + " draws");
        Target t;
        t.range_m = rng.uniform(c.range_min_m, c.range_max_m);
        t.velocity_mps = rng.uniform(c.velocity_min_mps, c.velocity_max_mps);
        t.rcs_m2 = c.rcs_m2;
        t.phase_rad = rng.uniform(0.0, two_pi);
        bool ok = true;
        for (const auto& other : scene.targets) ok = ok && c.separated(t, other);
        if (ok) {
            scene.targets.push_back(t);
            misses = 0;
        } else if (++misses >= 64) {
            // Sequential placement can paint itself into a corner; restart.
            scene.targets.clear();
            misses = 0;
        }
    }
    validate_scene(scene, config);
    return scene;
}

}  // namespace dualwin
