// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "vsketch/image.hpp"
#include "vsketch/tensor.hpp"

namespace vsketch {

enum class CodecKind { identity, patchify, remote };

/// Which pixel <-> latent mapping to use. Parsed from "identity",
/// "patchify:<p>" or "remote".
struct CodecSpec {
    CodecKind kind = CodecKind::identity;
    int patch = 1;

    std::string id() const;
    static CodecSpec parse(const std::string& text);

    bool operator==(const CodecSpec&) const = default;
};

/// External VAE used by the remote codec.
class VaeService {
public:
    virtual ~VaeService() = default;
    virtual LatentVideo encode(const PixelVideo& video) = 0;
    virtual PixelVideo decode(const LatentVideo& latent, double fps) = 0;
};

/// Latent dimensions for a video of the given size. Remote codecs report an
/// unknown shape (all zeros) since the service decides.
LatentShape latent_shape(const CodecSpec& codec, std::size_t frames, int width, int height);

/// Pixels in [0, 1] map affinely to [-1, 1]. identity keeps the 3 channels
/// at full resolution; patchify(p) then moves each p x p block into channels,
/// channel index (dy * p + dx) * 3 + c. Latents are per frame: there is no
/// temporal compression.
LatentVideo encode(const PixelVideo& video, const CodecSpec& codec, VaeService* remote = nullptr);

/// Exact inverse of encode for local codecs, clamped to [0, 1].
PixelVideo decode(const LatentVideo& latent, const CodecSpec& codec, double fps = 8.0,
                  VaeService* remote = nullptr);

}  // namespace vsketch
