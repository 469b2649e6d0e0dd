// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace vsketch {

/// Counter-based normal generator.
///
/// Every draw is a pure function of (seed, stream, counter), so any slice of
/// a noise tensor can be produced independently and in any order:
///
///   word(seed, stream, n) = mix64(mix64(seed + G*(stream + 1)) + G*(n + 1))
///
/// where G = 0x9E3779B97F4A7C15 and mix64 is the SplitMix64 finalizer.
/// Uniforms are u = ((word >> 11) + 0.5) * 2^-53, which lies strictly inside
/// (0, 1). Normals come in Box-Muller pairs: counters 2k and 2k+1 give the
/// uniforms for normals 2k (cosine branch) and 2k+1 (sine branch).
class CounterNormalRng {
public:
    CounterNormalRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t word(std::uint64_t counter) const;
    double uniform(std::uint64_t counter) const;
    double normal(std::uint64_t index) const;

    /// Writes normals with indices [first, first + out.size()).
    void fill(std::span<double> out, std::uint64_t first = 0) const;

private:
    std::uint64_t m_key;
};

std::uint64_t mix64(std::uint64_t x);

/// Derives an independent seed for a named sub-task (stage, object, step).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace vsketch
