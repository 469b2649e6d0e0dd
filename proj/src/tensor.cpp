// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/tensor.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vsketch/error.hpp"

namespace vsketch {

std::string to_string(const LatentShape& shape) {
    return fmt::format("{}x{}x{}x{}", shape.frames, shape.channels, shape.height, shape.width);
}

LatentVideo::LatentVideo(LatentShape shape, std::string codec_id, double fill)
    : m_shape(shape), m_codec_id(std::move(codec_id)), m_data(shape.element_count(), fill) {}

LatentVideo::LatentVideo(LatentShape shape, std::string codec_id, std::vector<double> data)
    : m_shape(shape), m_codec_id(std::move(codec_id)), m_data(std::move(data)) {
    check(m_data.size() == m_shape.element_count(), ErrorCode::data,
          fmt::format("latent data has {} elements, shape {} needs {}", m_data.size(),
                      to_string(m_shape), m_shape.element_count()));
}

std::span<double> LatentVideo::frame(std::size_t index) {
    const std::size_t n = m_shape.frame_size();
    return std::span<double>(m_data).subspan(index * n, n);
}

std::span<const double> LatentVideo::frame(std::size_t index) const {
    const std::size_t n = m_shape.frame_size();
    return std::span<const double>(m_data).subspan(index * n, n);
}

double& LatentVideo::at(std::size_t f, std::size_t c, std::size_t y, std::size_t x) {
    return m_data[((f * m_shape.channels + c) * m_shape.height + y) * m_shape.width + x];
}

double LatentVideo::at(std::size_t f, std::size_t c, std::size_t y, std::size_t x) const {
    return m_data[((f * m_shape.channels + c) * m_shape.height + y) * m_shape.width + x];
}

bool LatentVideo::all_finite() const {
    for (double v : m_data)
        if (!std::isfinite(v))
            return false;
    return true;
}

double l2_distance(const LatentVideo& a, const LatentVideo& b) {
    check(a.shape() == b.shape(), ErrorCode::data,
          fmt::format("shape mismatch {} vs {}", to_string(a.shape()), to_string(b.shape())));
    double sum = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = da[i] - db[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double l2_norm(const LatentVideo& a) {
    double sum = 0.0;
    for (double v : a.data())
        sum += v * v;
    return std::sqrt(sum);
}

}  // namespace vsketch
