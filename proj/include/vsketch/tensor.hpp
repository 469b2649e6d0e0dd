// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vsketch {

/// Frames x channels x height x width.
struct LatentShape {
    std::size_t frames = 0;
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t frame_size() const { return channels * height * width; }
    std::size_t element_count() const { return frames * frame_size(); }

    bool operator==(const LatentShape&) const = default;
};

std::string to_string(const LatentShape& shape);

/// The diffusion state: a dense frame-major tensor plus the id of the codec
/// that produced it. Values are stored in double precision; the wire format
/// narrows to float32.
class LatentVideo {
public:
    LatentVideo() = default;
    LatentVideo(LatentShape shape, std::string codec_id, double fill = 0.0);
    LatentVideo(LatentShape shape, std::string codec_id, std::vector<double> data);

    const LatentShape& shape() const { return m_shape; }
    const std::string& codec_id() const { return m_codec_id; }

    std::span<double> data() { return m_data; }
    std::span<const double> data() const { return m_data; }

    std::span<double> frame(std::size_t index);
    std::span<const double> frame(std::size_t index) const;

    double& at(std::size_t f, std::size_t c, std::size_t y, std::size_t x);
    double at(std::size_t f, std::size_t c, std::size_t y, std::size_t x) const;

    std::size_t size() const { return m_data.size(); }

    /// Same shape and codec id, every element set to `fill`.
    LatentVideo like(double fill = 0.0) const { return LatentVideo(m_shape, m_codec_id, fill); }

    bool all_finite() const;

    bool operator==(const LatentVideo&) const = default;

private:
    LatentShape m_shape;
    std::string m_codec_id;
    std::vector<double> m_data;
};

/// Euclidean norm of (a - b).
double l2_distance(const LatentVideo& a, const LatentVideo& b);
double l2_norm(const LatentVideo& a);

}  // namespace vsketch
