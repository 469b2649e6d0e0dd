// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "vsketch/schedule.hpp"
#include "vsketch/tensor.hpp"

namespace vsketch {

/// Noise-prediction model: given a noisy latent at timestep t, estimate the
/// standard normal component. Timesteps are real-valued so solvers can query
/// intermediate points; integer timesteps are the common case.
class Denoiser {
public:
    virtual ~Denoiser() = default;

    /// Must return a tensor with the same shape as `z`. The conditioning text
    /// is passed through untouched.
    virtual LatentVideo predict_noise(const LatentVideo& z, double t,
                                      std::string_view conditioning) const = 0;

    /// Whether concurrent predict_noise calls are allowed.
    virtual bool thread_safe() const { return true; }
};

/// Exact noise predictor for data distributed as N(mu, sigma^2) per element.
/// With a = alpha_bar(t):
///   eps(z, t) = sqrt(1 - a) * (z - sqrt(a) * mu) / (a * sigma^2 + 1 - a)
class GaussianDenoiser final : public Denoiser {
public:
    GaussianDenoiser(double mu, double sigma, NoiseSchedule schedule);

    LatentVideo predict_noise(const LatentVideo& z, double t,
                              std::string_view conditioning) const override;

    double mu() const { return m_mu; }
    double sigma() const { return m_sigma; }

    /// Where the probability-flow ODE sends `z_t` at time t = 0. The flow
    /// preserves the standardized deviation (z - sqrt(a) mu) / sqrt(a sigma^2 + 1 - a).
    LatentVideo flow_to_data(const LatentVideo& z_t, double t) const;

private:
    double m_mu;
    double m_sigma;
    NoiseSchedule m_schedule;
};

}  // namespace vsketch
