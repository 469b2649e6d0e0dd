// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

// Payload encodings shared by the gateway client and the mock server. See
// docs/wire_protocol.md.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsketch/image.hpp"
#include "vsketch/tensor.hpp"

namespace vsketch {

/// Binary tensor: "VSKT", u16 version (1), u16 dtype (1 = f32), u32 ndim,
/// ndim x u64 dims, then f32 data in row-major order. All little endian.
struct WireTensor {
    std::vector<std::uint64_t> dims;
    std::vector<float> data;
};

constexpr std::uint16_t kTensorVersion = 1;
constexpr std::uint16_t kTensorDtypeF32 = 1;

std::vector<std::uint8_t> pack_tensor(const WireTensor& tensor);
/// Throws a parse error on a bad header or a size mismatch.
WireTensor unpack_tensor(const std::vector<std::uint8_t>& bytes);

/// {"vskt_base64": ..., "codec_id": ...}
nlohmann::json latent_to_json(const LatentVideo& latent);
LatentVideo latent_from_json(const nlohmann::json& j);

enum class ImageTransport { inline_png, file_path };
std::string to_string(ImageTransport transport);
ImageTransport parse_image_transport(const std::string& text);

/// Images travel as {"png_base64": ...} or, for local runs, {"path": ...}
/// pointing at a PNG file under scratch_dir. Decoding accepts both.
class ImageWire {
public:
    explicit ImageWire(ImageTransport transport = ImageTransport::inline_png,
                       std::filesystem::path scratch_dir = {});

    ImageTransport transport() const { return m_transport; }

    nlohmann::json encode(const Image& image) const;
    nlohmann::json encode(const Mask& mask) const;
    /// {"fps": ..., "frames": [image, ...]}
    nlohmann::json encode(const PixelVideo& video) const;

    static Image decode_image(const nlohmann::json& j);
    static Mask decode_mask(const nlohmann::json& j);
    static PixelVideo decode_video(const nlohmann::json& j);

private:
    nlohmann::json wrap(const std::vector<std::uint8_t>& png) const;

    ImageTransport m_transport;
    std::filesystem::path m_scratch;
};

}  // namespace vsketch
