// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vsketch/error.hpp"
#include "vsketch/rng.hpp"

namespace vsketch {
namespace {

LatentVideo predict_checked(const Denoiser& denoiser, const LatentVideo& z, double t,
                            std::string_view conditioning) {
    LatentVideo eps = denoiser.predict_noise(z, t, conditioning);
    if (eps.shape() != z.shape())
        fail(ErrorCode::data, fmt::format("denoiser returned shape {} for input {} at t={}",
                                          to_string(eps.shape()), to_string(z.shape()), t));
    return eps;
}

void check_finite(const LatentVideo& z, std::string_view what, double t, double t_prev) {
    if (!z.all_finite())
        fail(ErrorCode::numerical,
             fmt::format("non-finite {} in step {} -> {}", what, t, t_prev));
}

struct Node {
    double alpha;  // sqrt(alpha_bar)
    double sigma;  // sqrt(1 - alpha_bar)
};

Node node_at(const NoiseSchedule& schedule, double t) {
    const double a = schedule.alpha_bar_at(t);
    return {std::sqrt(a), std::sqrt(1.0 - a)};
}

// Integration variable u(t) for the given parameterization.
double integration_variable(const Node& n, StepParameterization p) {
    return p == StepParameterization::data_prediction ? n.alpha / n.sigma : n.sigma / n.alpha;
}

}  // namespace

std::string to_string(SolverKind kind) {
    return kind == SolverKind::dpmpp2 ? "dpmpp2" : "ddpm";
}

std::string to_string(StepGrid grid) {
    switch (grid) {
    case StepGrid::uniform:
        return "uniform";
    case StepGrid::quadratic:
        return "quadratic";
    case StepGrid::log_snr:
        return "log_snr";
    }
    return "?";
}

SolverKind parse_solver_kind(const std::string& text) {
    if (text == "dpmpp2")
        return SolverKind::dpmpp2;
    if (text == "ddpm")
        return SolverKind::ddpm;
    fail(ErrorCode::config, "unknown solver '" + text + "', expected dpmpp2 or ddpm");
}

StepGrid parse_step_grid(const std::string& text) {
    if (text == "uniform")
        return StepGrid::uniform;
    if (text == "quadratic")
        return StepGrid::quadratic;
    if (text == "log_snr")
        return StepGrid::log_snr;
    fail(ErrorCode::config, "unknown step grid '" + text + "', expected uniform, quadratic or log_snr");
}

LatentVideo drift(const LatentVideo& z, int t, const Denoiser& denoiser,
                  const NoiseSchedule& schedule, std::string_view conditioning) {
    const double beta = schedule.beta(t);
    const double g2 = schedule.diffusion_coeff_sq(t);
    LatentVideo eps = predict_checked(denoiser, z, t, conditioning);
    auto out = eps.data();
    auto in = z.data();
    for (std::size_t i = 0; i < in.size(); ++i)
        out[i] = -0.5 * beta * in[i] - g2 * out[i];
    return eps;
}

SolverCoefficients dpmpp2_coefficients(const NoiseSchedule& schedule, double t, double t_prev) {
    if (!(t_prev >= 0.0 && t_prev < t && t <= schedule.num_steps()))
        fail(ErrorCode::config, fmt::format("invalid step {} -> {} for T={}", t, t_prev,
                                            schedule.num_steps()));
    SolverCoefficients c;
    const Node from = node_at(schedule, t);
    const Node to = node_at(schedule, t_prev);
    double r = 0.5;
    if (t_prev > 0.0) {
        c.parameterization = StepParameterization::data_prediction;
        const double lambda_t = schedule.log_snr_at(t);
        const double lambda_prev = schedule.log_snr_at(t_prev);
        c.t_mid = schedule.time_for_log_snr(0.5 * (lambda_t + lambda_prev));
        c.t_mid = std::clamp(c.t_mid, t_prev, t);
        r = (schedule.log_snr_at(c.t_mid) - lambda_t) / (lambda_prev - lambda_t);
    } else {
        c.parameterization = StepParameterization::noise_prediction;
        const double kappa_t = from.sigma / from.alpha;
        c.t_mid = std::clamp(schedule.time_for_log_snr(-std::log(0.5 * kappa_t)), t_prev, t);
    }
    const Node mid = node_at(schedule, c.t_mid);
    const double u_t = integration_variable(from, c.parameterization);
    const double u_mid = integration_variable(mid, c.parameterization);
    const double u_prev = t_prev > 0.0 ? integration_variable(to, c.parameterization) : 0.0;
    if (c.parameterization == StepParameterization::noise_prediction)
        r = (u_mid - u_t) / (u_prev - u_t);
    if (!(r > 0.0 && r < 1.0) || !std::isfinite(r))
        fail(ErrorCode::numerical,
             fmt::format("degenerate midpoint for step {} -> {} (r = {})", t, t_prev, r));
    const double span = u_prev - u_t;
    c.lambda3 = u_mid - u_t;
    c.lambda1 = span * (1.0 - 1.0 / (2.0 * r));
    c.lambda2 = span / (2.0 * r);
    return c;
}

LatentVideo step_dpmpp2(const LatentVideo& z_t, double t, double t_prev, const Denoiser& denoiser,
                        const NoiseSchedule& schedule, std::string_view conditioning) {
    const SolverCoefficients c = dpmpp2_coefficients(schedule, t, t_prev);
    const bool data_pred = c.parameterization == StepParameterization::data_prediction;
    const Node from = node_at(schedule, t);
    const Node mid = node_at(schedule, c.t_mid);
    const Node to = node_at(schedule, t_prev);

    // Rescaling z -> state and the slope F from a noise prediction.
    auto state_scale = [data_pred](const Node& n) { return data_pred ? 1.0 / n.sigma : 1.0 / n.alpha; };
    auto slope = [data_pred](const Node& n, double z, double eps) {
        return data_pred ? (z - n.sigma * eps) / n.alpha : eps;
    };

    const LatentVideo eps_t = predict_checked(denoiser, z_t, t, conditioning);
    check_finite(eps_t, "noise prediction", t, t_prev);

    const double in_scale = state_scale(from);
    const double mid_out = 1.0 / state_scale(mid);
    LatentVideo z_mid = z_t.like();
    {
        auto zt = z_t.data();
        auto e = eps_t.data();
        auto out = z_mid.data();
        for (std::size_t i = 0; i < zt.size(); ++i)
            out[i] = (in_scale * zt[i] + c.lambda3 * slope(from, zt[i], e[i])) * mid_out;
    }
    check_finite(z_mid, "midpoint state", t, t_prev);

    const LatentVideo eps_mid = predict_checked(denoiser, z_mid, c.t_mid, conditioning);
    check_finite(eps_mid, "midpoint noise prediction", t, t_prev);

    const double out_scale = data_pred ? to.sigma : to.alpha;
    LatentVideo z_prev = z_t.like();
    auto zt = z_t.data();
    auto zm = z_mid.data();
    auto e_t = eps_t.data();
    auto e_m = eps_mid.data();
    auto out = z_prev.data();
    for (std::size_t i = 0; i < zt.size(); ++i) {
        const double state = in_scale * zt[i] + c.lambda1 * slope(from, zt[i], e_t[i]) +
                             c.lambda2 * slope(mid, zm[i], e_m[i]);
        out[i] = state * out_scale;
    }
    check_finite(z_prev, "output", t, t_prev);
    return z_prev;
}

LatentVideo step_ddpm(const LatentVideo& z_t, int t, const Denoiser& denoiser,
                      const NoiseSchedule& schedule, std::uint64_t seed,
                      std::string_view conditioning) {
    check(t >= 1 && t <= schedule.num_steps(), ErrorCode::config,
          fmt::format("ddpm step from t={} outside [1, {}]", t, schedule.num_steps()));
    const double beta = schedule.beta(t);
    const double a_t = schedule.alpha_bar(t);
    const double a_prev = schedule.alpha_bar(t - 1);

    const LatentVideo eps = predict_checked(denoiser, z_t, t, conditioning);
    check_finite(eps, "noise prediction", t, t - 1);

    const double eps_scale = beta / std::sqrt(1.0 - a_t);
    const double inv_sqrt_alpha = 1.0 / std::sqrt(1.0 - beta);
    LatentVideo out = z_t.like();
    auto dst = out.data();
    auto zt = z_t.data();
    auto e = eps.data();
    for (std::size_t i = 0; i < zt.size(); ++i)
        dst[i] = inv_sqrt_alpha * (zt[i] - eps_scale * e[i]);

    if (t > 1) {
        const double std_dev = std::sqrt(beta * (1.0 - a_prev) / (1.0 - a_t));
        const LatentVideo noise = standard_normal_like(z_t, derive_seed(seed, static_cast<std::uint64_t>(t)));
        auto n = noise.data();
        for (std::size_t i = 0; i < dst.size(); ++i)
            dst[i] += std_dev * n[i];
    }
    check_finite(out, "output", t, t - 1);
    return out;
}

std::vector<double> step_grid(const NoiseSchedule& schedule, double t_start, int num_steps,
                              StepGrid grid) {
    check(num_steps >= 1, ErrorCode::config, "step grid needs at least one step");
    check(t_start > 0.0 && t_start <= schedule.num_steps(), ErrorCode::config,
          fmt::format("grid start {} outside (0, {}]", t_start, schedule.num_steps()));
    std::vector<double> nodes(static_cast<std::size_t>(num_steps) + 1);
    const double n = num_steps;
    switch (grid) {
    case StepGrid::uniform:
        for (int k = 0; k <= num_steps; ++k)
            nodes[static_cast<std::size_t>(k)] = t_start * (num_steps - k) / n;
        break;
    case StepGrid::quadratic:
        for (int k = 0; k <= num_steps; ++k) {
            const double w = (num_steps - k) / n;
            nodes[static_cast<std::size_t>(k)] = t_start * w * w;
        }
        break;
    case StepGrid::log_snr: {
        // Uniform in log-SNR down to t = 1 (or the start when it is below 1),
        // then a final step to t = 0.
        const double t_end = std::min(1.0, t_start);
        nodes.front() = t_start;
        nodes.back() = 0.0;
        if (num_steps > 1) {
            const double l0 = schedule.log_snr_at(t_start);
            const double l1 = schedule.log_snr_at(t_end);
            for (int k = 1; k < num_steps - 1; ++k)
                nodes[static_cast<std::size_t>(k)] =
                    schedule.time_for_log_snr(l0 + (l1 - l0) * k / (num_steps - 1));
            nodes[static_cast<std::size_t>(num_steps - 1)] = t_end;
        }
        break;
    }
    }
    nodes.front() = t_start;
    nodes.back() = 0.0;
    // Guard against duplicate nodes from rounding in the log-SNR inverse.
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

LatentVideo sample_from(const LatentVideo& z_init, int t_inv, const Denoiser& denoiser,
                        const NoiseSchedule& schedule, const SamplerOptions& options) {
    check(t_inv >= 0 && t_inv <= schedule.num_steps(), ErrorCode::config,
          fmt::format("start timestep {} outside [0, {}]", t_inv, schedule.num_steps()));
    check(z_init.all_finite(), ErrorCode::data, "initial latent contains non-finite values");
    if (t_inv == 0)
        return z_init;

    LatentVideo z = z_init;
    if (options.kind == SolverKind::ddpm) {
        for (int t = t_inv; t >= 1; --t)
            z = step_ddpm(z, t, denoiser, schedule, options.seed, options.conditioning);
        return z;
    }

    const int steps = std::max(
        1, static_cast<int>(std::lround(static_cast<double>(options.num_steps) * t_inv /
                                        schedule.num_steps())));
    const std::vector<double> nodes = step_grid(schedule, t_inv, steps, options.grid);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
        z = step_dpmpp2(z, nodes[k], nodes[k + 1], denoiser, schedule, options.conditioning);
    return z;
}

}  // namespace vsketch
