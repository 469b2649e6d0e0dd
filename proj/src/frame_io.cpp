// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/frame_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <json.hpp>
#include <png.h>

#include "vsketch/error.hpp"

namespace vsketch {
namespace {

std::uint8_t to_byte(float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

std::vector<std::uint8_t> write_memory(png_image& info, const std::vector<std::uint8_t>& pixels) {
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&info, nullptr, &size, 0, pixels.data(), 0, nullptr))
        fail(ErrorCode::io, std::string("png encode failed: ") + info.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&info, out.data(), &size, 0, pixels.data(), 0, nullptr))
        fail(ErrorCode::io, std::string("png encode failed: ") + info.message);
    out.resize(size);
    return out;
}

std::vector<std::uint8_t> read_memory(const std::vector<std::uint8_t>& bytes, std::uint32_t format,
                                      int& width, int& height) {
    png_image info{};
    info.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&info, bytes.data(), bytes.size()))
        fail(ErrorCode::data, std::string("png decode failed: ") + info.message);
    info.format = format;
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(info));
    if (!png_image_finish_read(&info, nullptr, pixels.data(), 0, nullptr)) {
        png_image_free(&info);
        fail(ErrorCode::data, std::string("png decode failed: ") + info.message);
    }
    width = static_cast<int>(info.width);
    height = static_cast<int>(info.height);
    return pixels;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& image) {
    check(!image.empty(), ErrorCode::data, "cannot encode an empty image");
    std::vector<std::uint8_t> pixels(image.data().size());
    std::transform(image.data().begin(), image.data().end(), pixels.begin(), to_byte);
    png_image info{};
    info.version = PNG_IMAGE_VERSION;
    info.width = static_cast<png_uint_32>(image.width());
    info.height = static_cast<png_uint_32>(image.height());
    info.format = PNG_FORMAT_RGB;
    return write_memory(info, pixels);
}

std::vector<std::uint8_t> encode_png(const Mask& mask) {
    check(mask.width() > 0 && mask.height() > 0, ErrorCode::data, "cannot encode an empty mask");
    std::vector<std::uint8_t> pixels(mask.data().size());
    std::transform(mask.data().begin(), mask.data().end(), pixels.begin(), to_byte);
    png_image info{};
    info.version = PNG_IMAGE_VERSION;
    info.width = static_cast<png_uint_32>(mask.width());
    info.height = static_cast<png_uint_32>(mask.height());
    info.format = PNG_FORMAT_GRAY;
    return write_memory(info, pixels);
}

Image decode_png_image(const std::vector<std::uint8_t>& bytes) {
    int width = 0;
    int height = 0;
    const auto pixels = read_memory(bytes, PNG_FORMAT_RGB, width, height);
    std::vector<float> rgb(pixels.size());
    std::transform(pixels.begin(), pixels.end(), rgb.begin(),
                   [](std::uint8_t b) { return static_cast<float>(b) / 255.0f; });
    return Image(width, height, std::move(rgb));
}

Mask decode_png_mask(const std::vector<std::uint8_t>& bytes) {
    int width = 0;
    int height = 0;
    const auto pixels = read_memory(bytes, PNG_FORMAT_GRAY, width, height);
    Mask mask(width, height);
    std::transform(pixels.begin(), pixels.end(), mask.data().begin(),
                   [](std::uint8_t b) { return static_cast<float>(b) / 255.0f; });
    return mask;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    check(in.good(), ErrorCode::io, "cannot open " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    check(out.good(), ErrorCode::io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    check(out.good(), ErrorCode::io, "short write to " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::string read_text(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return std::string(bytes.begin(), bytes.end());
}

void write_png(const std::filesystem::path& path, const Image& image) {
    write_file(path, encode_png(image));
}

void write_png(const std::filesystem::path& path, const Mask& mask) {
    write_file(path, encode_png(mask));
}

Image read_png_image(const std::filesystem::path& path) {
    return decode_png_image(read_file(path));
}

Mask read_png_mask(const std::filesystem::path& path) {
    return decode_png_mask(read_file(path));
}

std::string frame_file_name(std::size_t index) {
    return fmt::format("frame_{:05d}.png", index);
}

std::vector<std::filesystem::path> write_frame_directory(const std::filesystem::path& dir,
                                                         const PixelVideo& video) {
    video.validate();
    std::filesystem::create_directories(dir);
    // Drop frames left over from an earlier, longer run.
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.starts_with("frame_") && name.ends_with(".png"))
            std::filesystem::remove(entry.path());
    }
    std::vector<std::filesystem::path> paths;
    for (std::size_t i = 0; i < video.frames.size(); ++i) {
        paths.push_back(dir / frame_file_name(i));
        write_png(paths.back(), video.frames[i]);
    }
    const nlohmann::json index = {{"fps", video.fps},
                                  {"count", video.frames.size()},
                                  {"width", video.width()},
                                  {"height", video.height()}};
    write_text(dir / "index.json", index.dump(2) + "\n");
    return paths;
}

PixelVideo read_frame_directory(const std::filesystem::path& dir) {
    nlohmann::json index;
    try {
        index = nlohmann::json::parse(read_text(dir / "index.json"));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::io, fmt::format("bad index.json in {}: {}", dir.string(), e.what()));
    }
    PixelVideo video;
    video.fps = index.at("fps").get<double>();
    const auto count = index.at("count").get<std::size_t>();
    for (std::size_t i = 0; i < count; ++i)
        video.frames.push_back(read_png_image(dir / frame_file_name(i)));
    video.validate();
    return video;
}

}  // namespace vsketch
