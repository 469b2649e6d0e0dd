// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/image.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vsketch/error.hpp"

namespace vsketch {

Image::Image(int width, int height, float fill)
    : m_width(width), m_height(height) {
    check(width >= 0 && height >= 0, ErrorCode::data, "image dimensions must be non-negative");
    m_data.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3, fill);
}

Image::Image(int width, int height, std::vector<float> rgb)
    : m_width(width), m_height(height), m_data(std::move(rgb)) {
    check(width >= 0 && height >= 0 &&
              m_data.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3,
          ErrorCode::data, fmt::format("pixel buffer of {} floats does not match {}x{}x3",
                                       m_data.size(), width, height));
}

Mask::Mask(int width, int height, float fill) : m_width(width), m_height(height) {
    check(width >= 0 && height >= 0, ErrorCode::data, "mask dimensions must be non-negative");
    m_data.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

void PixelVideo::validate() const {
    check(!frames.empty(), ErrorCode::data, "video has no frames");
    check(fps > 0.0 && std::isfinite(fps), ErrorCode::data, fmt::format("invalid fps {}", fps));
    const int w = frames.front().width();
    const int h = frames.front().height();
    check(w >= 1 && h >= 1, ErrorCode::data, "video frames must be at least 1x1");
    for (std::size_t i = 0; i < frames.size(); ++i)
        check(frames[i].width() == w && frames[i].height() == h, ErrorCode::data,
              fmt::format("frame {} is {}x{}, expected {}x{}", i, frames[i].width(),
                          frames[i].height(), w, h));
}

void clamp_unit(Image& image) {
    for (float& v : image.data())
        v = std::clamp(v, 0.0f, 1.0f);
}

Image quantize8(const Image& image) {
    Image out = image;
    for (float& v : out.data()) {
        const long level = std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f);
        v = static_cast<float>(level) / 255.0f;
    }
    return out;
}

PixelVideo quantize8(const PixelVideo& video) {
    PixelVideo out;
    out.fps = video.fps;
    out.frames.reserve(video.frames.size());
    for (const Image& frame : video.frames)
        out.frames.push_back(quantize8(frame));
    return out;
}

}  // namespace vsketch
