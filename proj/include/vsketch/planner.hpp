// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vsketch/chat.hpp"
#include "vsketch/layout.hpp"
#include "vsketch/schedule.hpp"

namespace vsketch {

struct PromptTemplate {
    std::string name;
    int version = 1;
    std::string text;

    /// "<name>@v<version>:<first 12 hex of sha256(text)>"
    std::string id() const;
};

const PromptTemplate& background_template();
const PromptTemplate& plan_template();
const PromptTemplate& alpha_template();

/// Replaces each {{key}} in the template with values.at(key) in one pass;
/// substituted text is never rescanned. Unknown keys are a config error.
std::string render_template(const PromptTemplate& tpl, const std::map<std::string, std::string>& values);

struct PromptBundle {
    std::string background_prompt;
    std::string plan_prompt;
    std::string alpha_prompt;
};

/// The video prompt is inserted as a JSON string literal.
std::string build_background_prompt(const std::string& video_prompt);
std::string build_plan_prompt(const std::string& video_prompt, const std::vector<DetectedObject>& boxes,
                              int frame_count);
std::string build_alpha_prompt(const std::string& video_prompt, const AlphaRange& range);

/// {"label": "path", "box": [0.44, 0.57, 0.99, 0.99]}
std::string format_detected_box(const DetectedObject& object);

constexpr double kBoxClampMargin = 0.02;
constexpr double kDefaultMaxStep = 0.25;

/// Extracts the first parseable JSON object or array from text. Throws a
/// parse error if there is none.
nlohmann::json extract_json_block(std::string_view text);

/// Accepts {"frames": [...], "reasoning": ..., "alpha": ...} or a bare frame
/// array. Placements may be [name, [x1, y1, x2, y2]] pairs or
/// {"name", "box"} objects. With a "size" header ({"width", "height"} or
/// [w, h]) coordinates are pixels and get normalized. Coordinates within
/// 0.02 outside [0, 1] are clamped; anything else is a schema error.
/// frame_count > 0 rejects plans with more frames than that.
LayoutPlan parse_layout_plan(std::string_view llm_text, int frame_count);

/// plan.json form; parse_layout_plan(serialize_plan(p).dump()) == p.
nlohmann::json serialize_plan(const LayoutPlan& plan);

/// Sorts frames by index, rejects duplicate or out-of-range indices and
/// renumbers 0..n-1 when the plan has exactly frame_count frames. Checks
/// that each object's center moves at most max_step (as a fraction of the
/// frame diagonal) per frame step and that no object vanishes and comes
/// back. Idempotent.
LayoutPlan validate_plan(const LayoutPlan& plan, int frame_count, double max_step = kDefaultMaxStep);

/// Fills frames 0..frame_count-1. Keyframes are copied exactly; other
/// frames get per-object linear interpolation between the surrounding
/// keyframes holding the object, and the nearest keyframe box outside them.
LayoutPlan interpolate_trajectory(const LayoutPlan& plan, int frame_count);

enum class AlphaSource { json_field, number, clamped_number, fallback, fixed };
std::string to_string(AlphaSource source);

struct AlphaSelection {
    double alpha = 0.0;
    AlphaSource source = AlphaSource::fallback;
    std::string prompt;
    std::string response;
};

/// Reads alpha from a chat response: an "alpha" JSON field, else the first
/// number inside [0, 1], else the first number at all, else the range
/// midpoint. The result is clamped to range.
AlphaSelection parse_alpha_response(const std::string& response, const AlphaRange& range);

/// range must satisfy 0 < lo <= hi < 1.
AlphaSelection select_alpha(const std::string& video_prompt, const AlphaRange& range, ChatClient& llm);

enum class Direction { left, right, up, down, none };
std::string to_string(Direction d);
Direction parse_direction(const std::string& text);

struct ObjectSpec {
    std::string name;
    int count = 1;
    Direction direction = Direction::none;

    bool operator==(const ObjectSpec&) const = default;
};

/// Parses "name[:count[:direction]]", e.g. "egg:1:left".
ObjectSpec parse_object_spec(const std::string& text);

/// Crude reading of a prompt such as "three balls rolling right" into
/// object specs. Falls back to a single static "object".
std::vector<ObjectSpec> guess_object_specs(const std::string& video_prompt);

/// Lays all instances side by side on a horizontal band, one equal slot
/// each, and moves them along their direction without leaving their slot
/// (horizontal) or the frame (vertical). Instances of an object with
/// count > 1 are named "name#1".."name#k".
LayoutPlan fallback_plan(const std::string& video_prompt, int frame_count,
                         const std::vector<ObjectSpec>& specs);

}  // namespace vsketch
