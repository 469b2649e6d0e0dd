// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

// Fixed response corpora shared by the planner unit tests and the acceptance
// runner.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vsketch/error.hpp"

namespace vsketch::testing {

struct PlanCase {
    std::string name;
    std::string text;
    int frame_count;
    std::optional<ErrorCode> error;  // nullopt: must be accepted
    std::size_t frames = 0;          // accepted plans: frame count after validation
};

inline std::vector<PlanCase> plan_corpus() {
    const std::string two_frames =
        R"({"frames": [{"index": 0, "caption": "cat on the right", "placements": [["cat", [0.6, 0.5, 0.8, 0.8]]]},)"
        R"( {"index": 1, "caption": "cat moves left", "placements": [["cat", [0.5, 0.5, 0.7, 0.8]]]}],)"
        R"( "reasoning": "the cat sits on the floor"})";
    return {
        {"well_formed", two_frames, 2, std::nullopt, 2},
        {"prose_wrapped", "Sure! Here is the layout you asked for.\n```json\n" + two_frames +
                              "\n```\nLet me know if you want changes.",
         2, std::nullopt, 2},
        {"bracket_prose_first", "Step [1]: think. Step [2]: answer.\n" + two_frames + "\n(end)", 2, std::nullopt, 2},
        {"object_placements",
         R"({"frames": [{"index": 0, "placements": [{"name": "egg", "box": [0.1, 0.1, 0.3, 0.3]}]},)"
         R"( {"index": 1, "placements": [{"name": "egg", "box": [0.15, 0.1, 0.35, 0.3]}]}]})",
         2, std::nullopt, 2},
        {"bare_frame_array",
         R"([{"index": 0, "placements": [["ball", [0.1, 0.6, 0.2, 0.7]]]}, {"index": 1, "placements": [["ball", [0.2, 0.6, 0.3, 0.7]]]}])",
         2, std::nullopt, 2},
        {"pixel_size_header",
         R"({"size": {"width": 640, "height": 480}, "frames": [{"index": 0, "placements": [["dog", [64, 240, 192, 432]]]},)"
         R"( {"index": 1, "placements": [["dog", [128, 240, 256, 432]]]}]})",
         2, std::nullopt, 2},
        {"margin_slop_clamped",
         R"({"frames": [{"index": 0, "placements": [["bird", [-0.01, 0.0, 0.2, 0.2]], ["kite", [0.8, 0.8, 1.015, 1.0]]]},)"
         R"( {"index": 1, "placements": [["bird", [0.0, 0.0, 0.21, 0.2]], ["kite", [0.79, 0.8, 1.0, 1.0]]]}]})",
         2, std::nullopt, 2},
        {"one_based_renumbered",
         R"({"frames": [{"index": 1, "placements": [["car", [0.1, 0.5, 0.3, 0.7]]]}, {"index": 2, "placements": [["car", [0.2, 0.5, 0.4, 0.7]]]},)"
         R"( {"index": 3, "placements": [["car", [0.3, 0.5, 0.5, 0.7]]]}]})",
         3, std::nullopt, 3},
        {"sparse_keyframes",
         R"({"frames": [{"index": 0, "placements": [["boat", [0.1, 0.4, 0.3, 0.6]]]}, {"index": 3, "placements": [["boat", [0.6, 0.4, 0.8, 0.6]]]}]})",
         4, std::nullopt, 2},
        {"x1_ge_x2",
         R"({"frames": [{"index": 0, "placements": [["cat", [0.5, 0.5, 0.4, 0.9]]]}, {"index": 1, "placements": [["cat", [0.4, 0.5, 0.6, 0.9]]]}]})",
         2, ErrorCode::schema},
        {"y1_ge_y2",
         R"({"frames": [{"index": 0, "placements": [["cat", [0.1, 0.9, 0.4, 0.2]]]}]})", 2, ErrorCode::schema},
        {"far_out_of_range",
         R"({"frames": [{"index": 0, "placements": [["cat", [0.1, 0.2, 1.2, 0.4]]]}]})", 2, ErrorCode::schema},
        {"three_number_box",
         R"({"frames": [{"index": 0, "placements": [["cat", [0.1, 0.2, 0.4]]]}]})", 2, ErrorCode::schema},
        {"string_coordinate",
         R"({"frames": [{"index": 0, "placements": [["cat", ["0.1", 0.2, 0.4, 0.5]]]}]})", 2, ErrorCode::schema},
        {"no_json", "I am sorry, I cannot plan this video.", 2, ErrorCode::parse},
        {"truncated_json", R"(Here you go: {"frames": [{"index": 0, "placements": [["cat", [0.1)", 2, ErrorCode::parse},
        {"missing_frames", R"({"reasoning": "nothing to place"})", 2, ErrorCode::schema},
        {"jump_to_corner",
         R"({"frames": [{"index": 0, "placements": [["ball", [0.4, 0.4, 0.6, 0.6]]]}, {"index": 1, "placements": [["ball", [0.85, 0.85, 1.0, 1.0]]]}]})",
         2, ErrorCode::continuity},
        {"vanish_reappear",
         R"({"frames": [{"index": 0, "placements": [["fox", [0.1, 0.1, 0.3, 0.3]]]}, {"index": 1, "placements": []},)"
         R"( {"index": 2, "placements": [["fox", [0.12, 0.1, 0.32, 0.3]]]}]})",
         3, ErrorCode::continuity},
        {"duplicate_index",
         R"({"frames": [{"index": 0, "placements": [["fox", [0.1, 0.1, 0.3, 0.3]]]}, {"index": 0, "placements": [["fox", [0.1, 0.1, 0.3, 0.3]]]}]})",
         3, ErrorCode::schema},
    };
}

struct AlphaCase {
    std::string response;
    double lo;
    double hi;
    double expected;
};

inline std::vector<AlphaCase> alpha_corpus() {
    std::vector<AlphaCase> out;
    const std::vector<std::pair<std::string, std::pair<double, double>>> responses = {
        // response, expected for [0.7, 0.9], expected for [0.5, 0.8]
        {"0.7", {0.7, 0.7}},
        {"0.95", {0.9, 0.8}},
        {"I think medium", {0.8, 0.65}},
        {"", {0.8, 0.65}},
        {"-3", {0.7, 0.5}},
        {"1e308", {0.9, 0.8}},
        {"1e999", {0.8, 0.65}},
        {"NaN", {0.8, 0.65}},
        {"inf", {0.8, 0.65}},
        {R"({"alpha": 2})", {0.9, 0.8}},
        {R"({"alpha": -0.5})", {0.7, 0.5}},
        {R"({"alpha": "0.75"})", {0.75, 0.75}},
        {R"({"alpha": "high"})", {0.8, 0.65}},
        {R"({"alpha": null})", {0.8, 0.65}},
        {R"({"alpha": 1e400})", {0.8, 0.65}},
        {"alpha = 0.0001", {0.7, 0.5}},
        {"75%", {0.9, 0.8}},
        {"somewhere in 0.7-0.9", {0.7, 0.7}},
        {"between 5 and 8 tenths", {0.9, 0.8}},
        {"0.999999999999999999999999", {0.9, 0.8}},
        {"{{{{", {0.8, 0.65}},
        {"]]]", {0.8, 0.65}},
        {".", {0.8, 0.65}},
        {"..5", {0.7, 0.5}},
        {"0.75.3", {0.75, 0.75}},
        {"\xe2\x88\x92" "0.9", {0.9, 0.8}},
        {"The answer is \xce\xb1 = 0.85.", {0.85, 0.8}},
        {"0x1p-3", {0.7, 0.5}},
        {"1", {0.9, 0.8}},
        {"0", {0.7, 0.5}},
        {"+0.6", {0.7, 0.6}},
        {R"(```json
{"alpha": 0.72}
```)", {0.72, 0.72}},
        {R"({"ratio": 0.6})", {0.7, 0.6}},
        {R"({"alpha": [0.6]})", {0.7, 0.6}},
        {std::string(5000, '9'), {0.8, 0.65}},
        {"-0.0", {0.7, 0.5}},
        {"I would use 3/4", {0.9, 0.8}},
        {"zero point seven", {0.8, 0.65}},
        {"e", {0.8, 0.65}},
        {"1e-400", {0.7, 0.5}},
        {std::string("0.7\0", 4) + "0.9", {0.7, 0.7}},
        {"\"alpha\": 0.81", {0.81, 0.8}},
        {"[0.55, 0.9]", {0.7, 0.55}},
        {"{\"alpha\": 0.65} and later {\"alpha\": 0.99}", {0.7, 0.65}},
        {"-inf", {0.8, 0.65}},
        {"Use 0.88!", {0.88, 0.8}},
        {"9999999999999999999999999999999999999999", {0.9, 0.8}},
        {"0.5e1", {0.9, 0.8}},
        {"\n\t 0.79 \n", {0.79, 0.79}},
        {"Answer: {\"alpha\": 0.74, \"why\": \"layout}\"}", {0.74, 0.74}},
    };
    // The cases are split evenly across the two ranges.
    for (std::size_t i = 0; i < responses.size(); ++i) {
        const auto& [text, expect] = responses[i];
        if (i % 2 == 0)
            out.push_back({text, 0.7, 0.9, expect.first});
        else
            out.push_back({text, 0.5, 0.8, expect.second});
    }
    return out;
}

}  // namespace vsketch::testing
