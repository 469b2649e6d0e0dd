// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/codec.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

#include "vsketch/error.hpp"

namespace vsketch {

std::string CodecSpec::id() const {
    switch (kind) {
    case CodecKind::identity:
        return "identity";
    case CodecKind::patchify:
        return fmt::format("patchify:{}", patch);
    case CodecKind::remote:
        return "remote";
    }
    return "?";
}

CodecSpec CodecSpec::parse(const std::string& text) {
    if (text == "identity")
        return {CodecKind::identity, 1};
    if (text == "remote")
        return {CodecKind::remote, 1};
    if (text.starts_with("patchify:")) {
        int p = 0;
        const char* first = text.data() + 9;
        const char* last = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(first, last, p);
        if (ec == std::errc() && ptr == last && p >= 1)
            return {CodecKind::patchify, p};
    }
    fail(ErrorCode::config, "unknown codec '" + text + "', expected identity, patchify:<p> or remote");
}

LatentShape latent_shape(const CodecSpec& codec, std::size_t frames, int width, int height) {
    switch (codec.kind) {
    case CodecKind::identity:
        return {frames, 3, static_cast<std::size_t>(height), static_cast<std::size_t>(width)};
    case CodecKind::patchify: {
        const int p = codec.patch;
        if (width % p != 0 || height % p != 0)
            fail(ErrorCode::codec,
                 fmt::format("{}x{} frames are not divisible by patch size {}", width, height, p));
        return {frames, static_cast<std::size_t>(3 * p * p), static_cast<std::size_t>(height / p),
                static_cast<std::size_t>(width / p)};
    }
    case CodecKind::remote:
        return {};
    }
    return {};
}

LatentVideo encode(const PixelVideo& video, const CodecSpec& codec, VaeService* remote) {
    video.validate();
    if (codec.kind == CodecKind::remote) {
        check(remote != nullptr, ErrorCode::codec, "remote codec requested without a VAE service");
        LatentVideo z = remote->encode(video);
        check(z.shape().frames == video.frames.size() && z.all_finite(), ErrorCode::codec,
              "remote VAE returned an inconsistent latent");
        return z;
    }
    const int p = codec.kind == CodecKind::patchify ? codec.patch : 1;
    const LatentShape shape = latent_shape(codec, video.frames.size(), video.width(), video.height());
    LatentVideo z(shape, codec.id());
    for (std::size_t f = 0; f < shape.frames; ++f) {
        const Image& img = video.frames[f];
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x)
                for (int c = 0; c < 3; ++c) {
                    const auto channel = static_cast<std::size_t>(((y % p) * p + (x % p)) * 3 + c);
                    z.at(f, channel, static_cast<std::size_t>(y / p), static_cast<std::size_t>(x / p)) =
                        2.0 * static_cast<double>(img.at(x, y, c)) - 1.0;
                }
    }
    return z;
}

PixelVideo decode(const LatentVideo& latent, const CodecSpec& codec, double fps, VaeService* remote) {
    check(latent.codec_id() == codec.id(), ErrorCode::codec,
          fmt::format("latent was produced by codec '{}', cannot decode with '{}'",
                      latent.codec_id(), codec.id()));
    if (codec.kind == CodecKind::remote) {
        check(remote != nullptr, ErrorCode::codec, "remote codec requested without a VAE service");
        PixelVideo video = remote->decode(latent, fps);
        video.validate();
        for (Image& frame : video.frames)
            clamp_unit(frame);
        return video;
    }
    const int p = codec.kind == CodecKind::patchify ? codec.patch : 1;
    const LatentShape& shape = latent.shape();
    check(shape.channels == static_cast<std::size_t>(3 * p * p) && shape.frames >= 1, ErrorCode::codec,
          fmt::format("latent shape {} does not fit codec {}", to_string(shape), codec.id()));
    const int width = static_cast<int>(shape.width) * p;
    const int height = static_cast<int>(shape.height) * p;
    PixelVideo video;
    video.fps = fps;
    for (std::size_t f = 0; f < shape.frames; ++f) {
        Image img(width, height);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                for (int c = 0; c < 3; ++c) {
                    const auto channel = static_cast<std::size_t>(((y % p) * p + (x % p)) * 3 + c);
                    const double v = latent.at(f, channel, static_cast<std::size_t>(y / p),
                                               static_cast<std::size_t>(x / p));
                    img.at(x, y, c) = static_cast<float>(std::clamp((v + 1.0) * 0.5, 0.0, 1.0));
                }
        video.frames.push_back(std::move(img));
    }
    return video;
}

}  // namespace vsketch
