// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/wire.hpp"

#include <bit>
#include <cstring>
#include <functional>
#include <thread>

#include <fmt/format.h>

#include "vsketch/digest.hpp"
#include "vsketch/error.hpp"
#include "vsketch/frame_io.hpp"

namespace vsketch {
namespace {

template <class T>
void put_le(std::vector<std::uint8_t>& out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
        out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <class T>
T get_le(const std::vector<std::uint8_t>& in, std::size_t& pos) {
    check(pos + sizeof(T) <= in.size(), ErrorCode::parse, "tensor payload is truncated");
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        value |= static_cast<T>(static_cast<T>(in[pos + i]) << (8 * i));
    pos += sizeof(T);
    return value;
}

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
    if (!j.is_object() || !j.contains(name))
        fail(ErrorCode::parse, fmt::format("payload is missing \"{}\"", name));
    return j.at(name);
}

std::vector<std::uint8_t> png_bytes(const nlohmann::json& j) {
    if (j.is_object() && j.contains("png_base64") && j.at("png_base64").is_string())
        return base64_decode(j.at("png_base64").get<std::string>());
    if (j.is_object() && j.contains("path") && j.at("path").is_string())
        return read_file(j.at("path").get<std::string>());
    fail(ErrorCode::parse, "image payload needs \"png_base64\" or \"path\"");
}

}  // namespace

std::vector<std::uint8_t> pack_tensor(const WireTensor& tensor) {
    std::uint64_t count = 1;
    for (std::uint64_t d : tensor.dims)
        count *= d;
    check(count == tensor.data.size(), ErrorCode::data, "tensor dims do not match its data");
    std::vector<std::uint8_t> out{'V', 'S', 'K', 'T'};
    put_le<std::uint16_t>(out, kTensorVersion);
    put_le<std::uint16_t>(out, kTensorDtypeF32);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.dims.size()));
    for (std::uint64_t d : tensor.dims)
        put_le<std::uint64_t>(out, d);
    out.reserve(out.size() + 4 * tensor.data.size());
    for (float v : tensor.data)
        put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

WireTensor unpack_tensor(const std::vector<std::uint8_t>& bytes) {
    check(bytes.size() >= 12 && std::memcmp(bytes.data(), "VSKT", 4) == 0, ErrorCode::parse,
          "tensor payload does not start with VSKT");
    std::size_t pos = 4;
    const auto version = get_le<std::uint16_t>(bytes, pos);
    const auto dtype = get_le<std::uint16_t>(bytes, pos);
    check(version == kTensorVersion, ErrorCode::parse, fmt::format("unsupported tensor version {}", version));
    check(dtype == kTensorDtypeF32, ErrorCode::parse, fmt::format("unsupported tensor dtype {}", dtype));
    const auto ndim = get_le<std::uint32_t>(bytes, pos);
    check(ndim <= 16, ErrorCode::parse, fmt::format("tensor has {} dims", ndim));
    WireTensor t;
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < ndim; ++i) {
        t.dims.push_back(get_le<std::uint64_t>(bytes, pos));
        check(t.dims.back() <= (std::uint64_t{1} << 32), ErrorCode::parse, "tensor dim is too large");
        count *= t.dims.back();
    }
    check(bytes.size() - pos == 4 * count, ErrorCode::parse,
          fmt::format("tensor has {} data bytes, header implies {}", bytes.size() - pos, 4 * count));
    t.data.resize(count);
    for (std::uint64_t i = 0; i < count; ++i)
        t.data[i] = std::bit_cast<float>(get_le<std::uint32_t>(bytes, pos));
    return t;
}

nlohmann::json latent_to_json(const LatentVideo& latent) {
    const LatentShape& s = latent.shape();
    WireTensor t{{s.frames, s.channels, s.height, s.width}, {}};
    t.data.reserve(latent.size());
    for (double v : latent.data())
        t.data.push_back(static_cast<float>(v));
    return {{"vskt_base64", base64_encode(pack_tensor(t))}, {"codec_id", latent.codec_id()}};
}

LatentVideo latent_from_json(const nlohmann::json& j) {
    const auto& b64 = field(j, "vskt_base64");
    check(b64.is_string(), ErrorCode::parse, "vskt_base64 must be a string");
    const WireTensor t = unpack_tensor(base64_decode(b64.get<std::string>()));
    check(t.dims.size() == 4, ErrorCode::parse, fmt::format("latent tensor has {} dims, expected 4", t.dims.size()));
    std::string codec = "remote";
    if (j.contains("codec_id") && j.at("codec_id").is_string())
        codec = j.at("codec_id").get<std::string>();
    const LatentShape shape{t.dims[0], t.dims[1], t.dims[2], t.dims[3]};
    LatentVideo z(shape, codec, std::vector<double>(t.data.begin(), t.data.end()));
    check(z.all_finite(), ErrorCode::data, "latent tensor has non-finite values");
    return z;
}

std::string to_string(ImageTransport transport) {
    return transport == ImageTransport::inline_png ? "inline" : "path";
}

ImageTransport parse_image_transport(const std::string& text) {
    if (text == "inline")
        return ImageTransport::inline_png;
    if (text == "path")
        return ImageTransport::file_path;
    fail(ErrorCode::config, "image transport must be inline or path, got '" + text + "'");
}

ImageWire::ImageWire(ImageTransport transport, std::filesystem::path scratch_dir)
    : m_transport(transport), m_scratch(std::move(scratch_dir)) {
    if (m_transport == ImageTransport::file_path) {
        check(!m_scratch.empty(), ErrorCode::config, "path transport needs a scratch directory");
        std::filesystem::create_directories(m_scratch);
    }
}

nlohmann::json ImageWire::wrap(const std::vector<std::uint8_t>& png) const {
    if (m_transport == ImageTransport::inline_png)
        return {{"png_base64", base64_encode(png)}};
    // Content-addressed, so concurrent writers of the same image agree.
    const auto path = std::filesystem::absolute(m_scratch / (sha256_hex(png).substr(0, 24) + ".png"));
    if (!std::filesystem::exists(path)) {
        auto tmp = path;
        tmp += fmt::format(".{}.tmp", std::hash<std::thread::id>{}(std::this_thread::get_id()));
        write_file(tmp, png);
        std::filesystem::rename(tmp, path);
    }
    return {{"path", path.string()}};
}

nlohmann::json ImageWire::encode(const Image& image) const {
    return wrap(encode_png(image));
}

nlohmann::json ImageWire::encode(const Mask& mask) const {
    return wrap(encode_png(mask));
}

nlohmann::json ImageWire::encode(const PixelVideo& video) const {
    nlohmann::json frames = nlohmann::json::array();
    for (const Image& f : video.frames)
        frames.push_back(encode(f));
    return {{"fps", video.fps}, {"frames", frames}};
}

Image ImageWire::decode_image(const nlohmann::json& j) {
    return decode_png_image(png_bytes(j));
}

Mask ImageWire::decode_mask(const nlohmann::json& j) {
    return decode_png_mask(png_bytes(j));
}

PixelVideo ImageWire::decode_video(const nlohmann::json& j) {
    const auto& frames = field(j, "frames");
    check(frames.is_array(), ErrorCode::parse, "video frames must be a list");
    PixelVideo v;
    if (j.contains("fps") && j.at("fps").is_number())
        v.fps = j.at("fps").get<double>();
    for (const auto& f : frames)
        v.frames.push_back(decode_image(f));
    v.validate();
    return v;
}

}  // namespace vsketch
