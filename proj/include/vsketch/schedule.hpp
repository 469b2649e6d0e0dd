// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsketch/tensor.hpp"

namespace vsketch {

enum class BetaScheduleKind { linear, scaled_linear };

std::string to_string(BetaScheduleKind kind);
BetaScheduleKind parse_beta_schedule_kind(const std::string& text);

/// Discrete variance-preserving noise schedule over timesteps t = 0..T.
///
/// alpha_bar(0) = 1 and alpha_bar(t) = prod_{s=1..t} (1 - beta_s), computed
/// as a single running product in double precision. The diffusion
/// coefficient follows the variance-preserving convention g^2(t) = beta_t.
///
/// Continuous timesteps are supported by holding beta constant inside each
/// unit interval, so log alpha_bar is piecewise linear in t and
/// alpha_bar(k + f) = alpha_bar(k) * (1 - beta_{k+1})^f.
class NoiseSchedule {
public:
    /// Takes beta_1..beta_T.
    explicit NoiseSchedule(std::vector<double> betas);

    int num_steps() const { return static_cast<int>(m_betas.size()); }

    /// beta_t for 1 <= t <= T.
    double beta(int t) const;
    /// g^2(t), identical to beta(t).
    double diffusion_coeff_sq(int t) const { return beta(t); }
    /// alpha_bar_t for 0 <= t <= T.
    double alpha_bar(int t) const;

    std::span<const double> betas() const { return m_betas; }
    std::span<const double> alpha_bars() const { return m_alpha_bars; }

    /// alpha_bar at a real timestep in [0, T].
    double alpha_bar_at(double t) const;
    /// Half log signal-to-noise ratio 0.5 * ln(alpha_bar / (1 - alpha_bar)).
    /// +infinity at t = 0.
    double log_snr_at(double t) const;
    /// Inverse of log_snr_at on (0, T].
    double time_for_log_snr(double log_snr) const;

    nlohmann::json to_json() const;

    bool operator==(const NoiseSchedule&) const = default;

private:
    std::vector<double> m_betas;
    std::vector<double> m_alpha_bars;
    std::vector<double> m_log_alpha_bars;
};

/// Builds a schedule with betas interpolated between beta_start and
/// beta_end: linearly, or linearly in sqrt(beta) then squared.
NoiseSchedule make_schedule(int num_steps, double beta_start, double beta_end,
                            BetaScheduleKind kind);

struct SchedulePreset {
    int num_steps = 1000;
    double beta_start = 0.0001;
    double beta_end = 0.02;
    BetaScheduleKind kind = BetaScheduleKind::linear;

    NoiseSchedule build() const { return make_schedule(num_steps, beta_start, beta_end, kind); }
    nlohmann::json to_json() const;
};

/// Closed interval [lo, hi] of admissible inversion ratios.
struct AlphaRange {
    double lo = 0.0;
    double hi = 1.0;

    double clamp(double value) const;
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double value) const { return value >= lo && value <= hi; }
    void validate() const;
};

struct InversionConfig {
    double alpha_ratio = 0.8;
    AlphaRange backend_range{0.7, 0.9};
    std::uint64_t seed = 0;
    // Noise is always drawn independently per element and per frame. The
    // flag is kept so the manifest records it.
    bool per_frame_independent_noise = true;

    nlohmann::json to_json() const;
};

/// round_half_up(clamp(alpha, lo, hi) * T), clamped to [1, T].
int inversion_timestep(const InversionConfig& config, const NoiseSchedule& schedule);

/// z = sqrt(alpha_bar) * z0 + sqrt(1 - alpha_bar) * eps with eps drawn from
/// CounterNormalRng(seed, frame) at counter = element index in the frame.
LatentVideo forward_noise(const LatentVideo& z0, int t_inv, const NoiseSchedule& schedule,
                          std::uint64_t seed);

/// The standard normal tensor forward_noise would add for this seed.
LatentVideo standard_normal_like(const LatentVideo& like, std::uint64_t seed);

}  // namespace vsketch
