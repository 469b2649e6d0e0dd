// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/digest.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>
#include <openssl/sha.h>

#include "vsketch/error.hpp"
#include "vsketch/frame_io.hpp"

namespace vsketch {

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char md[SHA256_DIGEST_LENGTH];
    SHA256(bytes.data(), bytes.size(), md);
    std::string out;
    out.reserve(2 * SHA256_DIGEST_LENGTH);
    for (unsigned char b : md)
        out += fmt::format("{:02x}", b);
    return out;
}

std::string sha256_hex(std::string_view text) {
    return sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string sha256_file(const std::filesystem::path& path) {
    return sha256_hex(read_file(path));
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    check(text.size() % 4 == 0, ErrorCode::parse, "base64 length is not a multiple of 4");
    std::vector<std::uint8_t> out(3 * (text.size() / 4));
    const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                  static_cast<int>(text.size()));
    check(n >= 0, ErrorCode::parse, "malformed base64 payload");
    // EVP_DecodeBlock keeps the zero bytes that padding stands for.
    std::size_t size = static_cast<std::size_t>(n);
    if (!text.empty() && text.back() == '=')
        --size;
    if (text.size() >= 2 && text[text.size() - 2] == '=')
        --size;
    out.resize(size);
    return out;
}

}  // namespace vsketch
