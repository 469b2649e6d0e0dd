// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/rng.hpp"

#include <cmath>
#include <numbers>

namespace vsketch {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

CounterNormalRng::CounterNormalRng(std::uint64_t seed, std::uint64_t stream)
    : m_key(mix64(seed + kGolden * (stream + 1))) {}

std::uint64_t CounterNormalRng::word(std::uint64_t counter) const {
    return mix64(m_key + kGolden * (counter + 1));
}

double CounterNormalRng::uniform(std::uint64_t counter) const {
    return (static_cast<double>(word(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterNormalRng::normal(std::uint64_t index) const {
    const std::uint64_t pair = index & ~std::uint64_t{1};
    const double radius = std::sqrt(-2.0 * std::log(uniform(pair)));
    const double angle = 2.0 * std::numbers::pi * uniform(pair + 1);
    return (index & 1) ? radius * std::sin(angle) : radius * std::cos(angle);
}

void CounterNormalRng::fill(std::span<double> out, std::uint64_t first) const {
    std::size_t i = 0;
    std::uint64_t index = first;
    if ((index & 1) && i < out.size()) {
        out[i++] = normal(index++);
    }
    for (; i + 1 < out.size(); i += 2, index += 2) {
        const double radius = std::sqrt(-2.0 * std::log(uniform(index)));
        const double angle = 2.0 * std::numbers::pi * uniform(index + 1);
        out[i] = radius * std::cos(angle);
        out[i + 1] = radius * std::sin(angle);
    }
    if (i < out.size())
        out[i] = normal(index);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(mix64(seed) ^ (tag + kGolden));
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
    // FNV-1a over the tag bytes, then mixed with the seed.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return derive_seed(seed, h);
}

}  // namespace vsketch
