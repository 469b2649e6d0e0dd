// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vsketch {

/// RGB image with float channels in [0, 1], stored row-major and interleaved.
class Image {
public:
    Image() = default;
    Image(int width, int height, float fill = 0.0f);
    Image(int width, int height, std::vector<float> rgb);

    int width() const { return m_width; }
    int height() const { return m_height; }
    bool empty() const { return m_width == 0 || m_height == 0; }

    float& at(int x, int y, int c) { return m_data[index(x, y, c)]; }
    float at(int x, int y, int c) const { return m_data[index(x, y, c)]; }

    std::span<float> data() { return m_data; }
    std::span<const float> data() const { return m_data; }

    bool operator==(const Image&) const = default;

private:
    std::size_t index(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(m_width) +
                static_cast<std::size_t>(x)) * 3 + static_cast<std::size_t>(c);
    }

    int m_width = 0;
    int m_height = 0;
    std::vector<float> m_data;
};

/// Single-channel coverage map with values in [0, 1].
class Mask {
public:
    Mask() = default;
    Mask(int width, int height, float fill = 0.0f);

    int width() const { return m_width; }
    int height() const { return m_height; }

    float& at(int x, int y) { return m_data[static_cast<std::size_t>(y) * static_cast<std::size_t>(m_width) + static_cast<std::size_t>(x)]; }
    float at(int x, int y) const { return m_data[static_cast<std::size_t>(y) * static_cast<std::size_t>(m_width) + static_cast<std::size_t>(x)]; }

    std::span<float> data() { return m_data; }
    std::span<const float> data() const { return m_data; }

    bool operator==(const Mask&) const = default;

private:
    int m_width = 0;
    int m_height = 0;
    std::vector<float> m_data;
};

struct PixelVideo {
    std::vector<Image> frames;
    double fps = 8.0;

    int width() const { return frames.empty() ? 0 : frames.front().width(); }
    int height() const { return frames.empty() ? 0 : frames.front().height(); }

    /// Throws unless the video is nonempty, all frames share dimensions and
    /// fps is positive.
    void validate() const;

    bool operator==(const PixelVideo&) const = default;
};

/// Clamps every channel to [0, 1].
void clamp_unit(Image& image);

/// Rounds every channel to the nearest multiple of 1/255, the values an
/// 8-bit PNG round trip produces.
Image quantize8(const Image& image);
PixelVideo quantize8(const PixelVideo& video);

}  // namespace vsketch
