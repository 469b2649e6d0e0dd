// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "vsketch/error.hpp"
#include "vsketch/rng.hpp"

namespace vsketch {

std::string to_string(BetaScheduleKind kind) {
    return kind == BetaScheduleKind::linear ? "linear" : "scaled_linear";
}

BetaScheduleKind parse_beta_schedule_kind(const std::string& text) {
    if (text == "linear")
        return BetaScheduleKind::linear;
    if (text == "scaled_linear")
        return BetaScheduleKind::scaled_linear;
    fail(ErrorCode::config, "unknown beta schedule '" + text + "', expected linear or scaled_linear");
}

NoiseSchedule::NoiseSchedule(std::vector<double> betas) : m_betas(std::move(betas)) {
    check(!m_betas.empty(), ErrorCode::config, "noise schedule needs at least one step");
    m_alpha_bars.reserve(m_betas.size() + 1);
    m_log_alpha_bars.reserve(m_betas.size() + 1);
    m_alpha_bars.push_back(1.0);
    m_log_alpha_bars.push_back(0.0);
    double running = 1.0;
    double log_running = 0.0;
    for (std::size_t i = 0; i < m_betas.size(); ++i) {
        const double beta = m_betas[i];
        if (!(beta > 0.0 && beta < 1.0))
            fail(ErrorCode::config, fmt::format("beta_{} = {} is outside (0, 1)", i + 1, beta));
        running *= 1.0 - beta;
        log_running += std::log1p(-beta);
        m_alpha_bars.push_back(running);
        m_log_alpha_bars.push_back(log_running);
    }
}

double NoiseSchedule::beta(int t) const {
    check(t >= 1 && t <= num_steps(), ErrorCode::config,
          fmt::format("beta index {} outside [1, {}]", t, num_steps()));
    return m_betas[static_cast<std::size_t>(t - 1)];
}

double NoiseSchedule::alpha_bar(int t) const {
    check(t >= 0 && t <= num_steps(), ErrorCode::config,
          fmt::format("timestep {} outside [0, {}]", t, num_steps()));
    return m_alpha_bars[static_cast<std::size_t>(t)];
}

double NoiseSchedule::alpha_bar_at(double t) const {
    if (!(t >= 0.0 && t <= num_steps()))
        fail(ErrorCode::config, fmt::format("timestep {} outside [0, {}]", t, num_steps()));
    const double floor_t = std::floor(t);
    const auto k = static_cast<std::size_t>(floor_t);
    if (k == m_betas.size() || t == floor_t)
        return m_alpha_bars[k];
    const double frac = t - floor_t;
    return std::exp(m_log_alpha_bars[k] + frac * std::log1p(-m_betas[k]));
}

double NoiseSchedule::log_snr_at(double t) const {
    if (t == 0.0)
        return std::numeric_limits<double>::infinity();
    const double alpha_bar = alpha_bar_at(t);
    const double log_alpha_bar = std::log(alpha_bar);
    return 0.5 * (log_alpha_bar - std::log(-std::expm1(log_alpha_bar)));
}

double NoiseSchedule::time_for_log_snr(double log_snr) const {
    // alpha_bar = sigmoid(2 * log_snr)
    const double target = -std::log1p(std::exp(-2.0 * log_snr));
    if (target >= 0.0)
        return 0.0;
    if (target <= m_log_alpha_bars.back())
        return num_steps();
    // m_log_alpha_bars is decreasing; find the first index below target.
    auto it = std::upper_bound(m_log_alpha_bars.begin(), m_log_alpha_bars.end(), target,
                               [](double value, double element) { return value > element; });
    const auto k = static_cast<std::size_t>(it - m_log_alpha_bars.begin()) - 1;
    const double step = m_log_alpha_bars[k + 1] - m_log_alpha_bars[k];
    return static_cast<double>(k) + (target - m_log_alpha_bars[k]) / step;
}

nlohmann::json NoiseSchedule::to_json() const {
    return {{"num_steps", num_steps()},
            {"beta_first", m_betas.front()},
            {"beta_last", m_betas.back()},
            {"alpha_bar_last", m_alpha_bars.back()}};
}

NoiseSchedule make_schedule(int num_steps, double beta_start, double beta_end,
                            BetaScheduleKind kind) {
    check(num_steps >= 1, ErrorCode::config, fmt::format("schedule needs T >= 1, got {}", num_steps));
    if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0))
        fail(ErrorCode::config,
             fmt::format("need 0 < beta_start <= beta_end < 1, got [{}, {}]", beta_start, beta_end));

    std::vector<double> betas(static_cast<std::size_t>(num_steps));
    const bool scaled = kind == BetaScheduleKind::scaled_linear;
    const double lo = scaled ? std::sqrt(beta_start) : beta_start;
    const double hi = scaled ? std::sqrt(beta_end) : beta_end;
    for (int i = 0; i < num_steps; ++i) {
        const double w = num_steps == 1 ? 0.0 : static_cast<double>(i) / (num_steps - 1);
        double value = i == num_steps - 1 && num_steps > 1 ? hi : lo + (hi - lo) * w;
        betas[static_cast<std::size_t>(i)] = scaled ? value * value : value;
    }
    return NoiseSchedule(std::move(betas));
}

nlohmann::json SchedulePreset::to_json() const {
    return {{"num_steps", num_steps},
            {"beta_start", beta_start},
            {"beta_end", beta_end},
            {"kind", to_string(kind)}};
}

double AlphaRange::clamp(double value) const {
    return std::clamp(value, lo, hi);
}

void AlphaRange::validate() const {
    if (!(lo >= 0.0 && lo <= hi && hi <= 1.0))
        fail(ErrorCode::config, fmt::format("alpha range [{}, {}] is not inside [0, 1]", lo, hi));
}

nlohmann::json InversionConfig::to_json() const {
    return {{"alpha_ratio", alpha_ratio},
            {"backend_range", {backend_range.lo, backend_range.hi}},
            {"seed", seed},
            {"per_frame_independent_noise", per_frame_independent_noise}};
}

int inversion_timestep(const InversionConfig& config, const NoiseSchedule& schedule) {
    config.backend_range.validate();
    check(std::isfinite(config.alpha_ratio), ErrorCode::config, "alpha ratio is not finite");
    const double alpha = config.backend_range.clamp(config.alpha_ratio);
    const int steps = schedule.num_steps();
    const auto t = static_cast<long long>(std::floor(alpha * steps + 0.5));
    return static_cast<int>(std::clamp<long long>(t, 1, steps));
}

LatentVideo standard_normal_like(const LatentVideo& like, std::uint64_t seed) {
    LatentVideo eps = like.like();
    for (std::size_t f = 0; f < like.shape().frames; ++f)
        CounterNormalRng(seed, f).fill(eps.frame(f));
    return eps;
}

LatentVideo forward_noise(const LatentVideo& z0, int t_inv, const NoiseSchedule& schedule,
                          std::uint64_t seed) {
    check(t_inv >= 1 && t_inv <= schedule.num_steps(), ErrorCode::config,
          fmt::format("inversion timestep {} outside [1, {}]", t_inv, schedule.num_steps()));
    check(z0.all_finite(), ErrorCode::data, "forward_noise input contains non-finite values");

    const double alpha_bar = schedule.alpha_bar(t_inv);
    const double signal = std::sqrt(alpha_bar);
    const double noise = std::sqrt(1.0 - alpha_bar);

    LatentVideo out = standard_normal_like(z0, seed);
    auto dst = out.data();
    auto src = z0.data();
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] = signal * src[i] + noise * dst[i];
    return out;
}

}  // namespace vsketch
