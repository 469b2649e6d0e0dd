// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/denoiser.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vsketch/error.hpp"

namespace vsketch {

GaussianDenoiser::GaussianDenoiser(double mu, double sigma, NoiseSchedule schedule)
    : m_mu(mu), m_sigma(sigma), m_schedule(std::move(schedule)) {
    check(sigma > 0.0 && std::isfinite(sigma) && std::isfinite(mu), ErrorCode::config,
          fmt::format("gaussian prior needs finite mu and sigma > 0, got mu={} sigma={}", mu, sigma));
}

LatentVideo GaussianDenoiser::predict_noise(const LatentVideo& z, double t,
                                            std::string_view /*conditioning*/) const {
    const double a = m_schedule.alpha_bar_at(t);
    const double scale = std::sqrt(1.0 - a) / (a * m_sigma * m_sigma + 1.0 - a);
    const double shift = std::sqrt(a) * m_mu;
    LatentVideo eps = z.like();
    auto out = eps.data();
    auto in = z.data();
    for (std::size_t i = 0; i < in.size(); ++i)
        out[i] = scale * (in[i] - shift);
    return eps;
}

LatentVideo GaussianDenoiser::flow_to_data(const LatentVideo& z_t, double t) const {
    const double a = m_schedule.alpha_bar_at(t);
    const double scale = m_sigma / std::sqrt(a * m_sigma * m_sigma + 1.0 - a);
    const double shift = std::sqrt(a) * m_mu;
    LatentVideo x0 = z_t.like();
    auto out = x0.data();
    auto in = z_t.data();
    for (std::size_t i = 0; i < in.size(); ++i)
        out[i] = m_mu + scale * (in[i] - shift);
    return x0;
}

}  // namespace vsketch
