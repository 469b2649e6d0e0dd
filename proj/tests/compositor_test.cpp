// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "vsketch/compositor.hpp"
#include "vsketch/error.hpp"

using namespace vsketch;

namespace {

Image noise_image(int w, int h, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    Image img(w, h);
    for (float& x : img.data())
        x = u(gen);
    return img;
}

Sprite solid_sprite(int w, int h, float value, float alpha) {
    return Sprite{Image(w, h, value), Mask(w, h, alpha), "solid"};
}

// Bounding rect of pixels that differ between a and b; empty rect when equal.
PixelRect diff_rect(const Image& a, const Image& b) {
    PixelRect r{a.width(), a.height(), 0, 0};
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x)
            for (int c = 0; c < 3; ++c)
                if (a.at(x, y, c) != b.at(x, y, c)) {
                    r.x0 = std::min(r.x0, x);
                    r.y0 = std::min(r.y0, y);
                    r.x1 = std::max(r.x1, x + 1);
                    r.y1 = std::max(r.y1, y + 1);
                }
    return r;
}

bool inside(const PixelRect& inner, const PixelRect& outer) {
    if (inner.x1 <= inner.x0)
        return true;
    return inner.x0 >= outer.x0 && inner.y0 >= outer.y0 && inner.x1 <= outer.x1 && inner.y1 <= outer.y1;
}

LayoutPlan plan_of(std::vector<std::vector<Placement>> frames) {
    LayoutPlan plan;
    for (std::size_t i = 0; i < frames.size(); ++i)
        plan.frames.push_back(FramePlan{static_cast<int>(i), "", frames[i]});
    refresh_objects(plan);
    return plan;
}

}  // namespace

TEST(BoxToPixelsTest, FloorOriginCeilExtentClamp) {
    EXPECT_EQ(box_to_pixels({0.1, 0.2, 0.5, 0.75}, 10, 8), (PixelRect{1, 1, 5, 6}));
    EXPECT_EQ(box_to_pixels({0.15, 0.0, 0.51, 1.0}, 10, 8), (PixelRect{1, 0, 6, 8}));
    EXPECT_EQ(box_to_pixels({-0.1, -0.1, 1.2, 1.2}, 10, 8), (PixelRect{0, 0, 10, 8}));
}

TEST(ExtractSpriteTest, FullMaskKeepsWholeImage) {
    const Image img = noise_image(12, 7, 1);
    const Sprite s = extract_sprite(img, Mask(12, 7, 1.0f));
    EXPECT_EQ(s.color, img);
    EXPECT_EQ(s.alpha, Mask(12, 7, 1.0f));
}

TEST(ExtractSpriteTest, CropsToMaskExtent) {
    const Image img = noise_image(64, 64, 2);
    Mask m(64, 64);
    for (int y = 20; y < 30; ++y)
        for (int x = 5; x < 15; ++x)
            m.at(x, y) = 0.9f;
    m.at(40, 40) = 0.49f;  // below threshold, ignored for extent
    const Sprite s = extract_sprite(img, m, "An image of a cat");
    EXPECT_EQ(s.color.width(), 10);
    EXPECT_EQ(s.color.height(), 10);
    EXPECT_EQ(s.color.at(0, 0, 1), img.at(5, 20, 1));
    EXPECT_EQ(s.alpha.at(9, 9), 0.9f);
    EXPECT_EQ(s.source_prompt, "An image of a cat");
}

TEST(ExtractSpriteTest, Errors) {
    try {
        extract_sprite(Image(4, 4), Mask(4, 4, 0.0f));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::extraction);
    }
    EXPECT_THROW(extract_sprite(Image(4, 4), Mask(4, 5, 1.0f)), Error);
}

TEST(ResizeTest, SameSizeIsIdentity) {
    const Image img = noise_image(9, 5, 3);
    EXPECT_EQ(resize_bilinear(img, 9, 5), img);
}

TEST(ResizeTest, CornersAlignAndMidpointsInterpolate) {
    Image img(2, 1);
    img.at(0, 0, 0) = 0.0f;
    img.at(1, 0, 0) = 1.0f;
    const Image up = resize_bilinear(img, 5, 3);
    EXPECT_EQ(up.at(0, 0, 0), 0.0f);
    EXPECT_EQ(up.at(4, 2, 0), 1.0f);
    EXPECT_FLOAT_EQ(up.at(2, 1, 0), 0.5f);
    EXPECT_FLOAT_EQ(up.at(1, 0, 0), 0.25f);
}

TEST(PlaceSpriteTest, TransparentSpriteIsIdentity) {
    const Image frame = noise_image(32, 24, 4);
    const Sprite s{noise_image(7, 5, 5), Mask(7, 5, 0.0f), ""};
    EXPECT_EQ(place_sprite(frame, s, {0.1, 0.2, 0.8, 0.9}), frame);
}

TEST(PlaceSpriteTest, OpaqueFullCoverEqualsResizedSprite) {
    const Image frame = noise_image(32, 24, 6);
    const Image fg = noise_image(11, 6, 7);
    const Sprite s{fg, Mask(11, 6, 1.0f), ""};
    EXPECT_EQ(place_sprite(frame, s, {0.0, 0.0, 1.0, 1.0}), resize_bilinear(fg, 32, 24));
}

TEST(PlaceSpriteTest, HalfAlphaBlend) {
    const Image frame(8, 8, 0.0f);
    const Image out = place_sprite(frame, solid_sprite(3, 3, 1.0f, 0.5f), {0.0, 0.0, 1.0, 1.0});
    for (float v : out.data())
        EXPECT_EQ(v, 0.5f);
}

TEST(PlaceSpriteTest, OutsideBoxIsBitExact) {
    const Image frame = noise_image(40, 30, 8);
    const BBox box{0.23, 0.31, 0.57, 0.66};
    const PixelRect r = box_to_pixels(box, 40, 30);
    const Image out = place_sprite(frame, solid_sprite(5, 5, 0.7f, 0.8f), box);
    for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 40; ++x)
            for (int c = 0; c < 3; ++c)
                if (!r.contains(x, y))
                    EXPECT_EQ(out.at(x, y, c), frame.at(x, y, c));
    EXPECT_EQ(diff_rect(frame, out), r);
}

TEST(PlaceSpriteTest, LocalityOverRandomBoxes) {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Image frame = noise_image(33, 21, 9);
    for (int trial = 0; trial < 200; ++trial) {
        double a = u(gen), b = u(gen), c = u(gen), d = u(gen);
        const BBox box{std::min(a, b), std::min(c, d), std::max(a, b) + 0.05, std::max(c, d) + 0.05};
        const Sprite s{noise_image(1 + trial % 9, 1 + trial % 7, trial), Mask(1 + trial % 9, 1 + trial % 7, 0.6f), ""};
        const Image out = place_sprite(frame, s, box);
        EXPECT_TRUE(inside(diff_rect(frame, out), box_to_pixels(box, 33, 21))) << trial;
    }
}

TEST(PlaceSpriteTest, SubPixelBoxIsAnError) {
    try {
        place_sprite(Image(10, 10), solid_sprite(2, 2, 1.0f, 1.0f), {0.5, 0.5, 0.5, 0.9});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::placement);
    }
}

TEST(AssembleTest, EmptyPlanKeepsBackground) {
    PixelVideo bg;
    bg.frames = {noise_image(8, 8, 1), noise_image(8, 8, 2)};
    const VideoSketch sk = assemble_sketch(bg, {}, plan_of({{}, {}}));
    EXPECT_EQ(sk.frames, bg);
    EXPECT_EQ(sk.placements.size(), 2u);
}

TEST(AssembleTest, PaintersOrder) {
    PixelVideo bg;
    bg.frames = {Image(10, 10, 0.0f)};
    const std::map<std::string, Sprite> sprites{{"red", solid_sprite(2, 2, 0.25f, 1.0f)},
                                                {"blue", solid_sprite(2, 2, 0.75f, 1.0f)}};
    const BBox left{0.0, 0.0, 0.6, 1.0};
    const BBox right{0.4, 0.0, 1.0, 1.0};
    const VideoSketch sk = assemble_sketch(bg, sprites, plan_of({{{"red", left}, {"blue", right}}}));
    EXPECT_EQ(sk.frames.frames[0].at(5, 5, 0), 0.75f);
    EXPECT_EQ(sk.frames.frames[0].at(1, 5, 0), 0.25f);
    const VideoSketch flipped = assemble_sketch(bg, sprites, plan_of({{{"blue", right}, {"red", left}}}));
    EXPECT_EQ(flipped.frames.frames[0].at(5, 5, 0), 0.25f);
}

TEST(AssembleTest, DisjointPlacementsCommute) {
    PixelVideo bg;
    bg.frames = {noise_image(20, 20, 3)};
    const std::map<std::string, Sprite> sprites{{"a", Sprite{noise_image(4, 4, 4), Mask(4, 4, 0.7f), ""}},
                                                {"b", Sprite{noise_image(3, 5, 5), Mask(3, 5, 0.4f), ""}}};
    const BBox ba{0.0, 0.0, 0.4, 0.4};
    const BBox bb{0.5, 0.5, 0.9, 0.95};
    EXPECT_EQ(assemble_sketch(bg, sprites, plan_of({{{"a", ba}, {"b", bb}}})).frames,
              assemble_sketch(bg, sprites, plan_of({{{"b", bb}, {"a", ba}}})).frames);
}

TEST(AssembleTest, MovingBoxTracksPlan) {
    PixelVideo bg;
    bg.frames.assign(6, noise_image(48, 32, 6));
    const std::map<std::string, Sprite> sprites{{"egg", Sprite{noise_image(6, 6, 7), Mask(6, 6, 1.0f), ""}}};
    std::vector<std::vector<Placement>> frames;
    for (int i = 0; i < 6; ++i) {
        const double x = 0.7 - 0.1 * i;
        frames.push_back({{"egg#1", {x, 0.4, x + 0.2, 0.7}}});
    }
    const VideoSketch sk = assemble_sketch(bg, sprites, plan_of(frames));
    for (int i = 0; i < 6; ++i) {
        const PixelRect planned = box_to_pixels(frames[i][0].box, 48, 32);
        const PixelRect changed = diff_rect(bg.frames[i], sk.frames.frames[i]);
        EXPECT_TRUE(inside(changed, planned)) << i;
        EXPECT_GT(changed.x1, changed.x0) << i;
    }
}

TEST(AssembleTest, MissingSpriteIsAnError) {
    PixelVideo bg;
    bg.frames = {Image(4, 4)};
    try {
        assemble_sketch(bg, {}, plan_of({{{"ghost", {0.0, 0.0, 1.0, 1.0}}}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::assembly);
        EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
    }
}

TEST(AssembleTest, BackgroundResampledByNearestIndex) {
    PixelVideo bg;
    for (int i = 0; i < 3; ++i)
        bg.frames.push_back(Image(2, 2, static_cast<float>(i) / 2.0f));
    const VideoSketch sk = assemble_sketch(bg, {}, plan_of({{}, {}, {}, {}, {}}));
    ASSERT_EQ(sk.frames.frames.size(), 5u);
    const float expect[] = {0.0f, 0.5f, 0.5f, 1.0f, 1.0f};  // round(i * 2 / 4), halves away from zero
    for (int i = 0; i < 5; ++i)
        EXPECT_EQ(sk.frames.frames[static_cast<std::size_t>(i)].at(0, 0, 0), expect[i]) << i;
}

TEST(AssembleTest, Deterministic) {
    PixelVideo bg;
    bg.frames.assign(3, noise_image(16, 16, 2));
    const std::map<std::string, Sprite> sprites{{"x", Sprite{noise_image(5, 3, 1), Mask(5, 3, 0.3f), ""}}};
    const LayoutPlan plan = plan_of({{{"x", {0.1, 0.1, 0.6, 0.5}}}, {}, {{"x", {0.3, 0.1, 0.8, 0.5}}}});
    EXPECT_EQ(assemble_sketch(bg, sprites, plan).frames, assemble_sketch(bg, sprites, plan).frames);
}

TEST(LayoutTest, BaseObjectName) {
    EXPECT_EQ(base_object_name("egg#2"), "egg");
    EXPECT_EQ(base_object_name("egg"), "egg");
    EXPECT_EQ(base_object_name("c#"), "c#");
    EXPECT_EQ(base_object_name("#3"), "#3");
    EXPECT_EQ(base_object_name("a#b"), "a#b");
}
