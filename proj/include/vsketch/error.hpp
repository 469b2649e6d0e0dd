// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vsketch {

enum class ErrorCode {
    config,       // invalid parameters or configuration
    data,         // non-finite or malformed input data
    numerical,    // non-finite intermediate inside a solver
    parse,        // no parseable structure in text
    schema,       // structure parsed but violates the schema
    continuity,   // trajectory jumps or vanish/reappear
    layout,       // fallback planner cannot fit the request
    extraction,   // sprite extraction failed
    placement,    // sprite placement failed
    assembly,     // sketch assembly failed
    codec,        // latent codec shape or id mismatch
    io,           // file system
    gateway,      // external service call failed
    manifest,     // manifest inconsistency
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), m_code(code) {}

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void check(bool condition, ErrorCode code, const std::string& message) {
    if (!condition)
        throw Error(code, message);
}

}  // namespace vsketch
