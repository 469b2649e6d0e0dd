// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vsketch/denoiser.hpp"
#include "vsketch/schedule.hpp"
#include "vsketch/tensor.hpp"

namespace vsketch {

/// Reverse-process samplers.
///
/// The deterministic sampler is the two-stage DPM-Solver++ rule. Each step
/// from t to t_prev is written as
///
///   s_prev = s_t + lambda1 * F(s_t, t) + lambda2 * F(s_t + lambda3 * F(s_t, t), t_mid)
///
/// over a rescaled state s and a model-derived slope F:
///
///  * t_prev > 0 (data prediction): s = z / sigma_t, F = x0(z, t) =
///    (z - sigma_t * eps) / alpha_t, and the integration variable is
///    rho = alpha / sigma = exp(log_snr). t_mid sits at the log-SNR midpoint
///    of the step, r = (log_snr(t_mid) - log_snr(t)) / (log_snr(t_prev) - log_snr(t)).
///  * t_prev = 0 (noise prediction): log-SNR is infinite at t = 0, so the
///    last step integrates s = z / alpha_t with slope F = eps over
///    kappa = sigma / alpha, and t_mid sits at kappa_t / 2.
///
/// In both cases, with u the integration variable,
///   lambda3 = u(t_mid) - u(t)
///   lambda1 = (u(t_prev) - u(t)) * (1 - 1 / (2r))
///   lambda2 = (u(t_prev) - u(t)) / (2r)
/// which is second-order accurate. Here alpha = sqrt(alpha_bar) and
/// sigma = sqrt(1 - alpha_bar).
enum class StepParameterization { data_prediction, noise_prediction };

struct SolverCoefficients {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    double t_mid = 0.0;
    StepParameterization parameterization = StepParameterization::data_prediction;
};

enum class SolverKind { dpmpp2, ddpm };
enum class StepGrid { uniform, quadratic, log_snr };

std::string to_string(SolverKind kind);
std::string to_string(StepGrid grid);
SolverKind parse_solver_kind(const std::string& text);
StepGrid parse_step_grid(const std::string& text);

struct SamplerOptions {
    SolverKind kind = SolverKind::dpmpp2;
    /// dpmpp2 steps for a sweep over the whole schedule; partial sweeps use
    /// a proportional share (at least one step).
    int num_steps = 50;
    StepGrid grid = StepGrid::quadratic;
    /// Seed for ancestral noise (ddpm only).
    std::uint64_t seed = 0;
    std::string conditioning;
};

/// -1/2 beta_t z - g^2(t) eps(z, t) with g^2(t) = beta_t.
LatentVideo drift(const LatentVideo& z, int t, const Denoiser& denoiser,
                  const NoiseSchedule& schedule, std::string_view conditioning = {});

SolverCoefficients dpmpp2_coefficients(const NoiseSchedule& schedule, double t, double t_prev);

/// One deterministic second-order step from t to t_prev (0 <= t_prev < t <= T).
LatentVideo step_dpmpp2(const LatentVideo& z_t, double t, double t_prev, const Denoiser& denoiser,
                        const NoiseSchedule& schedule, std::string_view conditioning = {});

/// One ancestral step from t to t - 1. The posterior variance vanishes at
/// t = 1, so the final step returns the posterior mean of z0.
LatentVideo step_ddpm(const LatentVideo& z_t, int t, const Denoiser& denoiser,
                      const NoiseSchedule& schedule, std::uint64_t seed,
                      std::string_view conditioning = {});

/// Descending timesteps t_start = g[0] > ... > g[n] = 0.
std::vector<double> step_grid(const NoiseSchedule& schedule, double t_start, int num_steps,
                              StepGrid grid);

/// Denoises from t_inv to 0. dpmpp2 walks the step grid; ddpm walks every
/// integer timestep. t_inv = 0 returns the input unchanged.
LatentVideo sample_from(const LatentVideo& z_init, int t_inv, const Denoiser& denoiser,
                        const NoiseSchedule& schedule, const SamplerOptions& options);

}  // namespace vsketch
