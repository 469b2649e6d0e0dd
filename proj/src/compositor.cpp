// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/compositor.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "vsketch/error.hpp"

namespace vsketch {
namespace {

struct Tap {
    int i0;
    int i1;
    double w;
};

// Source taps for each destination coordinate under corner alignment.
std::vector<Tap> taps(int src, int dst) {
    std::vector<Tap> out(static_cast<std::size_t>(dst));
    const double scale = dst > 1 ? static_cast<double>(src - 1) / static_cast<double>(dst - 1) : 0.0;
    for (int i = 0; i < dst; ++i) {
        const double s = static_cast<double>(i) * scale;
        const int i0 = std::min(static_cast<int>(std::floor(s)), src - 1);
        const int i1 = std::min(i0 + 1, src - 1);
        out[static_cast<std::size_t>(i)] = {i0, i1, s - static_cast<double>(i0)};
    }
    return out;
}

template <class Sample>
float bilerp(const Tap& tx, const Tap& ty, Sample sample) {
    const double top = sample(tx.i0, ty.i0) * (1.0 - tx.w) + sample(tx.i1, ty.i0) * tx.w;
    const double bottom = sample(tx.i0, ty.i1) * (1.0 - tx.w) + sample(tx.i1, ty.i1) * tx.w;
    return static_cast<float>(top * (1.0 - ty.w) + bottom * ty.w);
}

const Sprite& lookup(const std::map<std::string, Sprite>& sprites, const std::string& name,
                     std::size_t frame) {
    auto it = sprites.find(name);
    if (it == sprites.end())
        it = sprites.find(base_object_name(name));
    if (it == sprites.end())
        fail(ErrorCode::assembly,
             fmt::format("plan frame {} places '{}' but no sprite with that name exists", frame, name));
    return it->second;
}

}  // namespace

PixelRect box_to_pixels(const BBox& box, int width, int height) {
    PixelRect r;
    r.x0 = std::clamp(static_cast<int>(std::floor(box.x1 * width)), 0, width);
    r.y0 = std::clamp(static_cast<int>(std::floor(box.y1 * height)), 0, height);
    r.x1 = std::clamp(static_cast<int>(std::ceil(box.x2 * width)), 0, width);
    r.y1 = std::clamp(static_cast<int>(std::ceil(box.y2 * height)), 0, height);
    return r;
}

Sprite extract_sprite(const Image& image, const Mask& mask, std::string source_prompt) {
    check(!image.empty(), ErrorCode::extraction, "object image is empty");
    check(image.width() == mask.width() && image.height() == mask.height(), ErrorCode::extraction,
          fmt::format("mask is {}x{} but image is {}x{}", mask.width(), mask.height(), image.width(),
                      image.height()));
    int x0 = image.width();
    int y0 = image.height();
    int x1 = -1;
    int y1 = -1;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask.at(x, y) >= kMaskThreshold) {
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
    check(x1 >= 0, ErrorCode::extraction, "mask has no pixel at or above 0.5");

    Sprite sprite{Image(x1 - x0 + 1, y1 - y0 + 1), Mask(x1 - x0 + 1, y1 - y0 + 1), std::move(source_prompt)};
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            for (int c = 0; c < 3; ++c)
                sprite.color.at(x - x0, y - y0, c) = image.at(x, y, c);
            sprite.alpha.at(x - x0, y - y0) = std::clamp(mask.at(x, y), 0.0f, 1.0f);
        }
    return sprite;
}

Image resize_bilinear(const Image& image, int width, int height) {
    check(!image.empty() && width >= 1 && height >= 1, ErrorCode::placement,
          fmt::format("cannot resize {}x{} to {}x{}", image.width(), image.height(), width, height));
    const auto tx = taps(image.width(), width);
    const auto ty = taps(image.height(), height);
    Image out(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < 3; ++c)
                out.at(x, y, c) = bilerp(tx[static_cast<std::size_t>(x)], ty[static_cast<std::size_t>(y)],
                                         [&](int sx, int sy) { return static_cast<double>(image.at(sx, sy, c)); });
    return out;
}

Mask resize_bilinear(const Mask& mask, int width, int height) {
    check(mask.width() >= 1 && mask.height() >= 1 && width >= 1 && height >= 1, ErrorCode::placement,
          fmt::format("cannot resize {}x{} mask to {}x{}", mask.width(), mask.height(), width, height));
    const auto tx = taps(mask.width(), width);
    const auto ty = taps(mask.height(), height);
    Mask out(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out.at(x, y) = bilerp(tx[static_cast<std::size_t>(x)], ty[static_cast<std::size_t>(y)],
                                  [&](int sx, int sy) { return static_cast<double>(mask.at(sx, sy)); });
    return out;
}

Image place_sprite(const Image& frame, const Sprite& sprite, const BBox& box) {
    check(!frame.empty(), ErrorCode::placement, "cannot place a sprite on an empty frame");
    check(sprite.color.width() == sprite.alpha.width() && sprite.color.height() == sprite.alpha.height(),
          ErrorCode::placement, "sprite color and alpha sizes differ");
    check(std::isfinite(box.x1) && std::isfinite(box.y1) && std::isfinite(box.x2) && std::isfinite(box.y2),
          ErrorCode::placement, "box has non-finite coordinates");
    const PixelRect r = box_to_pixels(box, frame.width(), frame.height());
    if (r.width() < 1 || r.height() < 1)
        fail(ErrorCode::placement,
             fmt::format("box [{}, {}, {}, {}] covers less than one pixel of a {}x{} frame", box.x1, box.y1,
                         box.x2, box.y2, frame.width(), frame.height()));

    const Image fg = resize_bilinear(sprite.color, r.width(), r.height());
    const Mask a = resize_bilinear(sprite.alpha, r.width(), r.height());
    Image out = frame;
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) {
            const float alpha = a.at(x - r.x0, y - r.y0);
            for (int c = 0; c < 3; ++c)
                out.at(x, y, c) = alpha * fg.at(x - r.x0, y - r.y0, c) + (1.0f - alpha) * frame.at(x, y, c);
        }
    return out;
}

VideoSketch assemble_sketch(const PixelVideo& background, const std::map<std::string, Sprite>& sprites,
                            const LayoutPlan& plan) {
    background.validate();
    const std::size_t n_bg = background.frames.size();
    const std::size_t n = plan.frames.empty() ? n_bg : plan.frames.size();

    VideoSketch sketch;
    sketch.frames.fps = background.fps;
    sketch.placements.resize(n);
    if (n != n_bg)
        spdlog::info("background has {} frames, plan has {}; resampling by nearest index", n_bg, n);

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t src = i;
        if (n != n_bg)
            src = n == 1 ? 0
                         : static_cast<std::size_t>(std::lround(static_cast<double>(i) *
                                                                static_cast<double>(n_bg - 1) /
                                                                static_cast<double>(n - 1)));
        Image frame = background.frames[src];
        if (!plan.frames.empty()) {
            for (const Placement& p : plan.frames[i].placements) {
                frame = place_sprite(frame, lookup(sprites, p.name, i), p.box);
                sketch.placements[i].push_back(p);
            }
        }
        sketch.frames.frames.push_back(std::move(frame));
    }
    return sketch;
}

nlohmann::json sketch_to_json(const VideoSketch& sketch) {
    nlohmann::json frames = nlohmann::json::array();
    for (std::size_t i = 0; i < sketch.placements.size(); ++i) {
        nlohmann::json list = nlohmann::json::array();
        for (const Placement& p : sketch.placements[i])
            list.push_back({{"name", p.name}, {"box", {p.box.x1, p.box.y1, p.box.x2, p.box.y2}}});
        frames.push_back({{"index", i}, {"placements", list}});
    }
    return {{"frame_count", sketch.frames.frames.size()},
            {"fps", sketch.frames.fps},
            {"width", sketch.frames.width()},
            {"height", sketch.frames.height()},
            {"frames", frames},
            {"provenance", sketch.provenance}};
}

}  // namespace vsketch
