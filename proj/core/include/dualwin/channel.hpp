#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dualwin/matrix.hpp"
#include "dualwin/ofdm_config.hpp"

namespace dualwin {

/// Point target. Positive velocity means the target is closing, which maps to
/// a positive Doppler shift.
struct Target {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double rcs_m2 = 10.0;
    double phase_rad = 0.0;  // in [0, 2 pi)
};

struct Scene {
    std::vector<Target> targets;
    std::size_t size() const noexcept { return targets.size(); }
};

/// Per-element complex AWGN variance of the received-frame noise, and the SNR
/// it was calibrated from.
struct NoiseSpec {
    double variance = 1.0;
    double snr_db = 0.0;
};

/// Echo amplitude law. With amplitude_exponent = 2 this is the monostatic
/// radar equation with unit antenna gains,
///   b = sqrt(c^2 sigma / ((4 pi)^3 R^4 f0^2)).
/// Other exponents keep b(reference_range) fixed and scale as
/// (reference_range / R)^exponent.
struct ChannelModel {
    double amplitude_exponent = 0.85;  // about 15 dB echo power spread over 10..80 m
    double reference_range_m = 80.0;
    double reference_rcs_m2 = 10.0;

    static ChannelModel radar_equation() { return ChannelModel{2.0, 80.0, 10.0}; }
};

struct TargetPhysicals {
    double amplitude = 0.0;
    double delay_s = 0.0;
    double doppler_hz = 0.0;
};

/// Amplitude, round-trip delay 2R/c and two-way Doppler 2 v f0 / c.
/// Throws Error(scene_invalid) for a target outside the model's validity
/// (non-positive range or RCS, phase outside [0, 2 pi), delay past the CP).
TargetPhysicals target_physicals(const Target& t, const OfdmConfig& config,
                                 const ChannelModel& model = {});

void validate_scene(const Scene& scene, const OfdmConfig& config);

/// Circular complex Gaussian N x M noise matrix with the given variance.
Matrix<cdouble> draw_noise(const OfdmConfig& config, const NoiseSpec& noise, std::uint64_t seed);

/// Received frame: sum over targets of b e^{j phi} F_Tx e^{j 2 pi T_O f_D l} e^{-j 2 pi tau k df}
/// plus noise. phi = phase - 2 pi f0 tau. std::nullopt noise gives the
/// noiseless superposition.
ComplexFrame synthesize_received(const ComplexFrame& ftx, const Scene& scene,
                                 const std::optional<NoiseSpec>& noise, const OfdmConfig& config,
                                 std::uint64_t noise_seed, const ChannelModel& model = {});

/// Element-wise F_Rx / F_Tx.
ComplexFrame normalize(const ComplexFrame& frx, const ComplexFrame& ftx);

/// variance = b_ref^2 / 10^(snr_db/10); b_ref is the echo amplitude of a
/// reference-RCS target at the model's reference range.
NoiseSpec calibrate_noise(double snr_db, const OfdmConfig& config, const ChannelModel& model = {});

enum class SeparationRule {
    both_axes,   // |dR| >= min_range_sep AND |dv| >= min_velocity_sep
    either_axis, // |dR| >= min_range_sep OR  |dv| >= min_velocity_sep
};

struct SceneConstraints {
    std::size_t count = 3;
    double range_min_m = 10.0;
    double range_max_m = 80.0;
    double velocity_min_mps = -100.0;
    double velocity_max_mps = 100.0;
    double min_range_sep_m = 10.0;
    double min_velocity_sep_mps = 10.0;
    SeparationRule separation = SeparationRule::both_axes;
    double rcs_m2 = 10.0;
    std::size_t max_attempts = 100000;

    bool separated(const Target& a, const Target& b) const noexcept;
};

/// Rejection sampler. Throws Error(sampler_exhausted) if max_attempts draws
/// do not produce a valid scene.
Scene sample_scene(const OfdmConfig& config, const SceneConstraints& constraints, std::uint64_t seed);

}  // namespace dualwin
