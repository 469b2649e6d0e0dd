// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vsketch/image.hpp"

namespace vsketch {

// 8-bit PNG encoding. Channel values are rounded to the nearest of 256 levels.
std::vector<std::uint8_t> encode_png(const Image& image);
std::vector<std::uint8_t> encode_png(const Mask& mask);
Image decode_png_image(const std::vector<std::uint8_t>& bytes);
Mask decode_png_mask(const std::vector<std::uint8_t>& bytes);

void write_png(const std::filesystem::path& path, const Image& image);
void write_png(const std::filesystem::path& path, const Mask& mask);
Image read_png_image(const std::filesystem::path& path);
Mask read_png_mask(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// "frame_00003.png"
std::string frame_file_name(std::size_t index);

/// Writes frame_%05d.png for every frame plus index.json with fps, count,
/// width and height. Returns the frame paths in order.
std::vector<std::filesystem::path> write_frame_directory(const std::filesystem::path& dir,
                                                         const PixelVideo& video);
PixelVideo read_frame_directory(const std::filesystem::path& dir);

}  // namespace vsketch
