// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "vsketch/codec.hpp"
#include "vsketch/error.hpp"
#include "vsketch/frame_io.hpp"

using namespace vsketch;

namespace {

PixelVideo random_video(std::size_t frames, int w, int h, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    PixelVideo v;
    for (std::size_t f = 0; f < frames; ++f) {
        Image img(w, h);
        for (float& x : img.data())
            x = u(gen);
        v.frames.push_back(img);
    }
    return v;
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("vsketch_codec_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST(CodecSpecTest, ParseAndId) {
    EXPECT_EQ(CodecSpec::parse("identity").kind, CodecKind::identity);
    EXPECT_EQ(CodecSpec::parse("patchify:4").patch, 4);
    EXPECT_EQ(CodecSpec::parse("patchify:4").id(), "patchify:4");
    EXPECT_EQ(CodecSpec::parse("remote").kind, CodecKind::remote);
    for (const char* bad : {"", "patchify", "patchify:", "patchify:0", "patchify:2x", "vae"})
        EXPECT_THROW(CodecSpec::parse(bad), Error) << bad;
}

TEST(CodecTest, IdentityMidGrayIsZero) {
    PixelVideo v;
    v.frames.assign(2, Image(5, 3, 0.5f));
    const LatentVideo z = encode(v, CodecSpec{});
    EXPECT_EQ(z.shape(), (LatentShape{2, 3, 3, 5}));
    for (double x : z.data())
        EXPECT_EQ(x, 0.0);
}

TEST(CodecTest, IdentityRoundTripIsExact) {
    const PixelVideo v = random_video(3, 17, 9, 1);
    const LatentVideo z = encode(v, CodecSpec{});
    EXPECT_EQ(z.codec_id(), "identity");
    EXPECT_EQ(decode(z, CodecSpec{}, v.fps), v);
}

TEST(CodecTest, PatchifyShape) {
    PixelVideo v;
    v.frames.assign(1, Image(64, 64, 0.25f));
    const LatentVideo z = encode(v, CodecSpec{CodecKind::patchify, 2});
    EXPECT_EQ(z.shape(), (LatentShape{1, 12, 32, 32}));
}

TEST(CodecTest, PatchifyRoundTripIsExact) {
    for (int p : {1, 2, 4}) {
        const PixelVideo v = random_video(2, 8 * p, 4 * p, static_cast<unsigned>(p));
        const CodecSpec codec{CodecKind::patchify, p};
        EXPECT_EQ(decode(encode(v, codec), codec, v.fps), v) << p;
    }
}

TEST(CodecTest, PatchifyChannelLayout) {
    Image img(2, 2);
    img.at(1, 0, 2) = 1.0f;  // dy=0 dx=1 c=2 -> channel 5
    PixelVideo v;
    v.frames.push_back(img);
    const LatentVideo z = encode(v, CodecSpec{CodecKind::patchify, 2});
    for (std::size_t c = 0; c < 12; ++c)
        EXPECT_EQ(z.at(0, c, 0, 0), c == 5 ? 1.0 : -1.0) << c;
}

TEST(CodecTest, ShapeIsAFunctionOfDims) {
    for (int w : {4, 8, 12})
        for (int h : {4, 16}) {
            const PixelVideo a = random_video(2, w, h, 3);
            const PixelVideo b = random_video(2, w, h, 4);
            const CodecSpec codec{CodecKind::patchify, 2};
            EXPECT_EQ(encode(a, codec).shape(), encode(b, codec).shape());
            EXPECT_EQ(encode(a, codec).shape(), latent_shape(codec, 2, w, h));
        }
}

TEST(CodecTest, DecodeClampsOutOfRangeLatents) {
    LatentVideo z({1, 3, 1, 2}, "identity", 0.0);
    z.at(0, 0, 0, 0) = 3.0;
    z.at(0, 1, 0, 1) = -7.0;
    const PixelVideo v = decode(z, CodecSpec{});
    EXPECT_EQ(v.frames[0].at(0, 0, 0), 1.0f);
    EXPECT_EQ(v.frames[0].at(1, 0, 1), 0.0f);
    EXPECT_EQ(v.frames[0].at(1, 0, 0), 0.5f);
}

TEST(CodecTest, Errors) {
    PixelVideo odd;
    odd.frames.assign(1, Image(5, 4));
    try {
        encode(odd, CodecSpec{CodecKind::patchify, 2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::codec);
    }
    EXPECT_THROW(encode(PixelVideo{}, CodecSpec{}), Error);

    PixelVideo v;
    v.frames.assign(1, Image(4, 4));
    const LatentVideo z = encode(v, CodecSpec{});
    EXPECT_THROW(decode(z, CodecSpec{CodecKind::patchify, 2}), Error);
    EXPECT_THROW(decode(LatentVideo({1, 5, 2, 2}, "identity"), CodecSpec{}), Error);
    EXPECT_THROW(encode(v, CodecSpec{CodecKind::remote, 1}), Error);
}

TEST(FrameIoTest, PngRoundTripMatchesQuantize) {
    const PixelVideo v = random_video(1, 13, 7, 9);
    const Image back = decode_png_image(encode_png(v.frames[0]));
    EXPECT_EQ(back, quantize8(v.frames[0]));
    EXPECT_EQ(quantize8(back), back);
}

TEST(FrameIoTest, MaskRoundTrip) {
    Mask m(6, 4);
    m.at(2, 1) = 1.0f;
    m.at(3, 3) = 0.5f;
    const Mask back = decode_png_mask(encode_png(m));
    EXPECT_EQ(back.at(2, 1), 1.0f);
    EXPECT_EQ(back.at(3, 3), 128.0f / 255.0f);
    EXPECT_EQ(back.at(0, 0), 0.0f);
}

TEST(FrameIoTest, DirectoryRoundTrip) {
    const auto dir = scratch("dir");
    PixelVideo v = quantize8(random_video(4, 8, 6, 2));
    v.fps = 12.0;
    const auto paths = write_frame_directory(dir, v);
    ASSERT_EQ(paths.size(), 4u);
    EXPECT_EQ(paths[3].filename(), "frame_00003.png");
    EXPECT_TRUE(std::filesystem::exists(dir / "index.json"));
    EXPECT_EQ(read_frame_directory(dir), v);

    // A shorter rewrite must not leave stale frames behind.
    v.frames.resize(2);
    write_frame_directory(dir, v);
    EXPECT_FALSE(std::filesystem::exists(dir / "frame_00002.png"));
    EXPECT_EQ(read_frame_directory(dir), v);
    std::filesystem::remove_all(dir);
}

TEST(FrameIoTest, Errors) {
    EXPECT_THROW(decode_png_image({1, 2, 3}), Error);
    EXPECT_THROW(read_frame_directory(scratch("missing")), Error);
}
