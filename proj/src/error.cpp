// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/error.hpp"

namespace vsketch {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::config: return "config";
    case ErrorCode::data: return "data";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::parse: return "parse";
    case ErrorCode::schema: return "schema";
    case ErrorCode::continuity: return "continuity";
    case ErrorCode::layout: return "layout";
    case ErrorCode::extraction: return "extraction";
    case ErrorCode::placement: return "placement";
    case ErrorCode::assembly: return "assembly";
    case ErrorCode::codec: return "codec";
    case ErrorCode::io: return "io";
    case ErrorCode::gateway: return "gateway";
    case ErrorCode::manifest: return "manifest";
    }
    return "unknown";
}

}  // namespace vsketch
