// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsketch/image.hpp"
#include "vsketch/layout.hpp"

namespace vsketch {

struct Sprite {
    Image color;
    Mask alpha;
    std::string source_prompt;
};

struct VideoSketch {
    PixelVideo frames;
    std::vector<std::vector<Placement>> placements;
    std::map<std::string, std::string> provenance;
};

/// Integer pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }

    bool operator==(const PixelRect&) const = default;
};

/// floor for the origin, ceil for the far edge, clamped to the frame.
PixelRect box_to_pixels(const BBox& box, int width, int height);

constexpr float kMaskThreshold = 0.5f;

/// Crops to the bounding box of mask pixels >= 0.5 and keeps the raw mask
/// values inside the crop as alpha.
Sprite extract_sprite(const Image& image, const Mask& mask, std::string source_prompt = {});

/// Corner-aligned bilinear resampling: output corners land exactly on input
/// corners.
Image resize_bilinear(const Image& image, int width, int height);
Mask resize_bilinear(const Mask& mask, int width, int height);

/// Alpha-over composite of the sprite resized to the box's pixel rect.
/// Pixels outside that rect are untouched.
Image place_sprite(const Image& frame, const Sprite& sprite, const BBox& box);

/// Composites every placement of every plan frame in listed order. Sprites
/// are looked up by placement name, then by the name without its "#k"
/// suffix. A background whose length differs from the plan is resampled by
/// nearest index.
VideoSketch assemble_sketch(const PixelVideo& background, const std::map<std::string, Sprite>& sprites,
                            const LayoutPlan& plan);

nlohmann::json sketch_to_json(const VideoSketch& sketch);

}  // namespace vsketch
