// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/planner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "vsketch/digest.hpp"
#include "vsketch/error.hpp"
#include "vsketch_templates.hpp"

namespace vsketch {
namespace {

using nlohmann::json;

std::string json_string(const std::string& text) {
    return json(text).dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string fmt_frame_object(int frame, std::size_t object, const std::string& name) {
    return fmt::format("at frame {}, object {} ('{}')", frame, object, name);
}

double number_at(const json& box, std::size_t i, int frame, std::size_t object, const std::string& name) {
    const json& v = box.at(i);
    if (!v.is_number())
        fail(ErrorCode::schema, "box coordinate is not a number " + fmt_frame_object(frame, object, name));
    const double d = v.get<double>();
    if (!std::isfinite(d))
        fail(ErrorCode::schema, "box coordinate is not finite " + fmt_frame_object(frame, object, name));
    return d;
}

BBox read_box(const json& box, double width, double height, int frame, std::size_t object,
              const std::string& name) {
    if (!box.is_array() || box.size() != 4)
        fail(ErrorCode::schema, "box must be [x1, y1, x2, y2] " + fmt_frame_object(frame, object, name));
    BBox b{number_at(box, 0, frame, object, name) / width, number_at(box, 1, frame, object, name) / height,
           number_at(box, 2, frame, object, name) / width, number_at(box, 3, frame, object, name) / height};
    if (b.x1 >= b.x2)
        fail(ErrorCode::schema, "x1 >= x2 " + fmt_frame_object(frame, object, name));
    if (b.y1 >= b.y2)
        fail(ErrorCode::schema, "y1 >= y2 " + fmt_frame_object(frame, object, name));
    for (double* v : {&b.x1, &b.y1, &b.x2, &b.y2}) {
        if (*v < -kBoxClampMargin || *v > 1.0 + kBoxClampMargin)
            fail(ErrorCode::schema, fmt::format("coordinate {} is outside [0, 1] ", *v) +
                                        fmt_frame_object(frame, object, name));
        *v = std::clamp(*v, 0.0, 1.0);
    }
    if (!b.valid())
        fail(ErrorCode::schema, "box is empty after clamping " + fmt_frame_object(frame, object, name));
    return b;
}

int read_index(const json& frame, int fallback) {
    if (!frame.contains("index"))
        return fallback;
    const json& v = frame.at("index");
    if (v.is_number_integer())
        return v.get<int>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e9)
            return static_cast<int>(d);
    }
    fail(ErrorCode::schema, fmt::format("frame {} has a non-integer index", fallback));
}

void check_unique_names(const FramePlan& frame) {
    std::set<std::string> seen;
    for (const Placement& p : frame.placements)
        if (!seen.insert(p.name).second)
            fail(ErrorCode::schema, fmt::format("object '{}' is placed twice in frame {}", p.name, frame.index));
}

double lerp(double a, double b, double w) {
    return std::clamp(a + (b - a) * w, 0.0, 1.0);
}

std::optional<double> to_number(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

void check_alpha_range(const AlphaRange& range) {
    if (!(range.lo > 0.0 && range.lo <= range.hi && range.hi < 1.0))
        fail(ErrorCode::config,
             fmt::format("alpha range [{}, {}] must satisfy 0 < lo <= hi < 1", range.lo, range.hi));
}

}  // namespace

std::string PromptTemplate::id() const {
    return fmt::format("{}@v{}:{}", name, version, sha256_hex(text).substr(0, 12));
}

const PromptTemplate& background_template() {
    static const PromptTemplate tpl{"background", 1, templates::kBackground};
    return tpl;
}

const PromptTemplate& plan_template() {
    static const PromptTemplate tpl{"plan", 1, templates::kPlan};
    return tpl;
}

const PromptTemplate& alpha_template() {
    static const PromptTemplate tpl{"alpha", 1, templates::kAlpha};
    return tpl;
}

std::string render_template(const PromptTemplate& tpl, const std::map<std::string, std::string>& values) {
    const std::string& text = tpl.text;
    std::string out;
    std::size_t pos = 0;
    while (true) {
        const auto open = text.find("{{", pos);
        if (open == std::string::npos)
            break;
        const auto close = text.find("}}", open + 2);
        if (close == std::string::npos)
            break;
        const std::string key = text.substr(open + 2, close - open - 2);
        const auto it = values.find(key);
        if (it == values.end())
            fail(ErrorCode::config, fmt::format("template {} needs a value for '{}'", tpl.id(), key));
        out.append(text, pos, open - pos);
        out += it->second;
        pos = close + 2;
    }
    out.append(text, pos, std::string::npos);
    return out;
}

std::string build_background_prompt(const std::string& video_prompt) {
    check(!video_prompt.empty(), ErrorCode::config, "video prompt is empty");
    return render_template(background_template(), {{"prompt", json_string(video_prompt)}});
}

std::string format_detected_box(const DetectedObject& object) {
    const BBox& b = object.box;
    return fmt::format("{{\"label\": {}, \"box\": [{}, {}, {}, {}]}}", json_string(object.label), b.x1, b.y1,
                       b.x2, b.y2);
}

std::string build_plan_prompt(const std::string& video_prompt, const std::vector<DetectedObject>& boxes,
                              int frame_count) {
    check(!video_prompt.empty(), ErrorCode::config, "video prompt is empty");
    check(frame_count >= 2, ErrorCode::config, fmt::format("frame count {} is below 2", frame_count));
    std::string listing;
    for (const DetectedObject& d : boxes) {
        if (!listing.empty())
            listing += '\n';
        listing += format_detected_box(d);
    }
    if (boxes.empty())
        listing = "no detected objects";
    return render_template(plan_template(), {{"prompt", json_string(video_prompt)},
                                             {"frame_count", std::to_string(frame_count)},
                                             {"boxes", listing}});
}

std::string build_alpha_prompt(const std::string& video_prompt, const AlphaRange& range) {
    check(!video_prompt.empty(), ErrorCode::config, "video prompt is empty");
    return render_template(alpha_template(), {{"prompt", json_string(video_prompt)},
                                              {"range_lo", fmt::format("{}", range.lo)},
                                              {"range_hi", fmt::format("{}", range.hi)}});
}

json extract_json_block(std::string_view text) {
    for (std::size_t start = 0; start < text.size(); ++start) {
        if (text[start] != '{' && text[start] != '[')
            continue;
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        std::size_t end = std::string_view::npos;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped)
                    escaped = false;
                else if (c == '\\')
                    escaped = true;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"')
                in_string = true;
            else if (c == '{' || c == '[')
                ++depth;
            else if (c == '}' || c == ']') {
                if (--depth == 0) {
                    end = i;
                    break;
                }
            }
        }
        if (end == std::string_view::npos)
            continue;
        json parsed = json::parse(text.substr(start, end - start + 1), nullptr, false);
        if (parsed.is_discarded())
            continue;
        // Skip things like "[1]" in surrounding prose.
        if (parsed.is_object() || (parsed.is_array() && !parsed.empty() && parsed.front().is_object()))
            return parsed;
    }
    fail(ErrorCode::parse, "response contains no JSON block");
}

LayoutPlan parse_layout_plan(std::string_view llm_text, int frame_count) {
    const json root = extract_json_block(llm_text);
    const json* frames = &root;
    if (root.is_object()) {
        if (!root.contains("frames") || !root.at("frames").is_array())
            fail(ErrorCode::schema, "plan JSON has no \"frames\" array");
        frames = &root.at("frames");
    }

    double width = 1.0;
    double height = 1.0;
    if (root.is_object() && root.contains("size")) {
        const json& size = root.at("size");
        bool ok = false;
        if (size.is_object() && size.contains("width") && size.contains("height") && size.at("width").is_number() &&
            size.at("height").is_number()) {
            width = size.at("width").get<double>();
            height = size.at("height").get<double>();
            ok = true;
        } else if (size.is_array() && size.size() == 2 && size[0].is_number() && size[1].is_number()) {
            width = size[0].get<double>();
            height = size[1].get<double>();
            ok = true;
        }
        if (!ok || !(width > 0.0 && height > 0.0 && std::isfinite(width) && std::isfinite(height)))
            fail(ErrorCode::schema, "\"size\" header must be {\"width\", \"height\"} or [w, h] with positive values");
    }

    LayoutPlan plan;
    if (root.is_object()) {
        if (root.contains("reasoning") && root.at("reasoning").is_string())
            plan.reasoning = root.at("reasoning").get<std::string>();
        if (root.contains("alpha") && root.at("alpha").is_number())
            plan.alpha = root.at("alpha").get<double>();
    }

    for (std::size_t k = 0; k < frames->size(); ++k) {
        const json& f = frames->at(k);
        if (!f.is_object())
            fail(ErrorCode::schema, fmt::format("frame {} is not a JSON object", k));
        FramePlan frame;
        frame.index = read_index(f, static_cast<int>(k));
        if (f.contains("caption") && f.at("caption").is_string())
            frame.caption = f.at("caption").get<std::string>();
        const char* key = f.contains("placements") ? "placements" : "objects";
        if (f.contains(key)) {
            const json& list = f.at(key);
            if (!list.is_array())
                fail(ErrorCode::schema, fmt::format("frame {} placements are not a list", frame.index));
            for (std::size_t m = 0; m < list.size(); ++m) {
                const json& p = list[m];
                std::string name;
                const json* box = nullptr;
                if (p.is_array() && p.size() == 2 && p[0].is_string()) {
                    name = p[0].get<std::string>();
                    box = &p[1];
                } else if (p.is_object() && p.contains("name") && p.at("name").is_string() && p.contains("box")) {
                    name = p.at("name").get<std::string>();
                    box = &p.at("box");
                } else {
                    fail(ErrorCode::schema, fmt::format("malformed placement at frame {}, object {}", frame.index, m));
                }
                if (name.empty())
                    fail(ErrorCode::schema, fmt::format("empty object name at frame {}, object {}", frame.index, m));
                frame.placements.push_back({name, read_box(*box, width, height, frame.index, m, name)});
            }
        }
        check_unique_names(frame);
        plan.frames.push_back(std::move(frame));
    }
    if (plan.frames.empty())
        fail(ErrorCode::schema, "plan has no frames");
    if (frame_count > 0 && plan.frames.size() > static_cast<std::size_t>(frame_count))
        fail(ErrorCode::schema,
             fmt::format("plan has {} frames but the video has {}", plan.frames.size(), frame_count));
    refresh_objects(plan);
    return plan;
}

json serialize_plan(const LayoutPlan& plan) {
    json frames = json::array();
    for (const FramePlan& f : plan.frames) {
        json placements = json::array();
        for (const Placement& p : f.placements)
            placements.push_back({{"name", p.name}, {"box", {p.box.x1, p.box.y1, p.box.x2, p.box.y2}}});
        frames.push_back({{"index", f.index}, {"caption", f.caption}, {"placements", placements}});
    }
    json out = {{"frames", frames}, {"reasoning", plan.reasoning}};
    if (plan.alpha)
        out["alpha"] = *plan.alpha;
    return out;
}

LayoutPlan validate_plan(const LayoutPlan& input, int frame_count, double max_step) {
    check(frame_count >= 1, ErrorCode::config, "frame count must be positive");
    check(max_step > 0.0, ErrorCode::config, "max step must be positive");
    check(!input.frames.empty(), ErrorCode::schema, "plan has no frames");

    LayoutPlan plan = input;
    std::stable_sort(plan.frames.begin(), plan.frames.end(),
                     [](const FramePlan& a, const FramePlan& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < plan.frames.size(); ++i)
        if (plan.frames[i].index == plan.frames[i - 1].index)
            fail(ErrorCode::schema, fmt::format("frame index {} appears more than once", plan.frames[i].index));
    if (plan.frames.size() == static_cast<std::size_t>(frame_count)) {
        for (std::size_t i = 0; i < plan.frames.size(); ++i)
            plan.frames[i].index = static_cast<int>(i);
    } else {
        for (const FramePlan& f : plan.frames)
            if (f.index < 0 || f.index >= frame_count)
                fail(ErrorCode::schema, fmt::format("frame index {} is outside 0..{}", f.index, frame_count - 1));
    }
    for (const FramePlan& f : plan.frames) {
        check_unique_names(f);
        for (std::size_t m = 0; m < f.placements.size(); ++m) {
            const Placement& p = f.placements[m];
            if (p.name.empty())
                fail(ErrorCode::schema, fmt::format("empty object name at frame {}, object {}", f.index, m));
            if (!p.box.valid())
                fail(ErrorCode::schema, "invalid box " + fmt_frame_object(f.index, m, p.name));
        }
    }
    refresh_objects(plan);

    const double diagonal = std::sqrt(2.0);
    for (const std::string& name : plan.objects) {
        std::optional<std::size_t> last;
        bool gone = false;
        std::optional<int> vanished_at;
        for (std::size_t k = 0; k < plan.frames.size(); ++k) {
            const FramePlan& f = plan.frames[k];
            const Placement* p = f.find(name);
            if (!p) {
                if (last && !vanished_at)
                    vanished_at = f.index;
                gone = last.has_value();
                continue;
            }
            if (gone)
                fail(ErrorCode::continuity, fmt::format("object '{}' vanishes at frame {} and reappears at frame {}",
                                                        name, *vanished_at, f.index));
            if (last) {
                const FramePlan& prev = plan.frames[*last];
                const Placement* q = prev.find(name);
                const double d = std::hypot(p->box.center_x() - q->box.center_x(),
                                            p->box.center_y() - q->box.center_y()) / diagonal;
                const int gap = f.index - prev.index;
                if (d > max_step * gap + 1e-12)
                    fail(ErrorCode::continuity,
                         fmt::format("object '{}' moves {:.3f} of the frame diagonal between frames {} and {} "
                                     "(limit {} per frame)",
                                     name, d, prev.index, f.index, max_step));
            }
            last = k;
        }
    }
    return plan;
}

LayoutPlan interpolate_trajectory(const LayoutPlan& input, int frame_count) {
    check(frame_count >= 1, ErrorCode::config, "frame count must be positive");
    check(!input.frames.empty(), ErrorCode::schema, "plan has no frames");
    std::vector<FramePlan> keys = input.frames;
    std::stable_sort(keys.begin(), keys.end(), [](const FramePlan& a, const FramePlan& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (keys[i].index < 0 || keys[i].index >= frame_count)
            fail(ErrorCode::schema, fmt::format("keyframe index {} is outside 0..{}", keys[i].index, frame_count - 1));
        if (i > 0 && keys[i].index == keys[i - 1].index)
            fail(ErrorCode::schema, fmt::format("keyframe index {} appears more than once", keys[i].index));
    }
    LayoutPlan base = input;
    refresh_objects(base);

    LayoutPlan out;
    out.reasoning = input.reasoning;
    out.alpha = input.alpha;
    std::size_t next = 0;  // first keyframe with index >= i
    for (int i = 0; i < frame_count; ++i) {
        while (next < keys.size() && keys[next].index < i)
            ++next;
        if (next < keys.size() && keys[next].index == i) {
            out.frames.push_back(keys[next]);
            continue;
        }
        FramePlan frame;
        frame.index = i;
        std::vector<std::string> order;
        const FramePlan& anchor = next > 0 ? keys[next - 1] : keys[next];
        for (const Placement& p : anchor.placements)
            order.push_back(p.name);
        for (const std::string& name : base.objects)
            if (std::find(order.begin(), order.end(), name) == order.end())
                order.push_back(name);

        for (const std::string& name : order) {
            const Placement* before = nullptr;
            int before_index = 0;
            for (std::size_t k = next; k-- > 0;)
                if (const Placement* p = keys[k].find(name)) {
                    before = p;
                    before_index = keys[k].index;
                    break;
                }
            const Placement* after = nullptr;
            int after_index = 0;
            for (std::size_t k = next; k < keys.size(); ++k)
                if (const Placement* p = keys[k].find(name)) {
                    after = p;
                    after_index = keys[k].index;
                    break;
                }
            BBox box;
            if (before && after) {
                const double w = static_cast<double>(i - before_index) / static_cast<double>(after_index - before_index);
                box = {lerp(before->box.x1, after->box.x1, w), lerp(before->box.y1, after->box.y1, w),
                       lerp(before->box.x2, after->box.x2, w), lerp(before->box.y2, after->box.y2, w)};
            } else {
                box = (before ? before : after)->box;
            }
            frame.placements.push_back({name, box});
        }
        out.frames.push_back(std::move(frame));
    }
    refresh_objects(out);
    return out;
}

std::string to_string(AlphaSource source) {
    switch (source) {
    case AlphaSource::json_field:
        return "json_field";
    case AlphaSource::number:
        return "number";
    case AlphaSource::clamped_number:
        return "clamped_number";
    case AlphaSource::fallback:
        return "fallback";
    case AlphaSource::fixed:
        return "fixed";
    }
    return "?";
}

AlphaSelection parse_alpha_response(const std::string& response, const AlphaRange& range) {
    AlphaSelection sel;
    sel.response = response;

    try {
        const json block = extract_json_block(response);
        if (block.is_object() && block.contains("alpha")) {
            const json& a = block.at("alpha");
            std::optional<double> v;
            if (a.is_number())
                v = a.get<double>();
            else if (a.is_string())
                v = to_number(a.get<std::string>());
            if (v && std::isfinite(*v)) {
                sel.alpha = range.clamp(*v);
                sel.source = AlphaSource::json_field;
                return sel;
            }
        }
    } catch (const Error&) {
    }

    static const std::regex number(R"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)");
    std::optional<double> first;
    for (auto it = std::sregex_iterator(response.begin(), response.end(), number); it != std::sregex_iterator();
         ++it) {
        const auto v = to_number(it->str());
        if (!v)
            continue;
        if (*v >= 0.0 && *v <= 1.0) {
            sel.alpha = range.clamp(*v);
            sel.source = AlphaSource::number;
            return sel;
        }
        if (!first)
            first = v;
    }
    if (first) {
        sel.alpha = range.clamp(*first);
        sel.source = AlphaSource::clamped_number;
        return sel;
    }
    sel.alpha = range.midpoint();
    sel.source = AlphaSource::fallback;
    spdlog::warn("no alpha in model response, using range midpoint {}", sel.alpha);
    return sel;
}

AlphaSelection select_alpha(const std::string& video_prompt, const AlphaRange& range, ChatClient& llm) {
    check_alpha_range(range);
    const std::string prompt = build_alpha_prompt(video_prompt, range);
    AlphaSelection sel = parse_alpha_response(llm.chat(user_prompt(prompt)), range);
    sel.prompt = prompt;
    return sel;
}

std::string to_string(Direction d) {
    switch (d) {
    case Direction::left:
        return "left";
    case Direction::right:
        return "right";
    case Direction::up:
        return "up";
    case Direction::down:
        return "down";
    case Direction::none:
        return "none";
    }
    return "?";
}

Direction parse_direction(const std::string& text) {
    for (Direction d : {Direction::left, Direction::right, Direction::up, Direction::down, Direction::none})
        if (text == to_string(d))
            return d;
    if (text == "static" || text.empty())
        return Direction::none;
    fail(ErrorCode::config, "unknown direction '" + text + "', expected left, right, up, down or none");
}

ObjectSpec parse_object_spec(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string part; std::getline(in, part, ':');)
        parts.push_back(part);
    if (parts.empty() || parts.size() > 3 || parts[0].empty())
        fail(ErrorCode::config, "object spec '" + text + "' is not name[:count[:direction]]");
    ObjectSpec spec{parts[0], 1, Direction::none};
    if (parts.size() >= 2) {
        const auto n = to_number(parts[1]);
        if (!n || *n < 1.0 || *n != std::floor(*n) || *n > 1e6)
            fail(ErrorCode::config, "object count in '" + text + "' must be a positive integer");
        spec.count = static_cast<int>(*n);
    }
    if (parts.size() == 3)
        spec.direction = parse_direction(parts[2]);
    return spec;
}

namespace {

// "balls" -> "ball", "boxes" -> "box", "puppies" -> "puppy".
std::string singular(const std::string& w) {
    if (w.size() > 3 && w.ends_with("ies"))
        return w.substr(0, w.size() - 3) + "y";
    for (const char* suffix : {"ches", "shes", "sses", "xes", "zes"})
        if (w.size() > 4 && w.ends_with(suffix))
            return w.substr(0, w.size() - 2);
    if (w.size() > 2 && w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us"))
        return w.substr(0, w.size() - 1);
    return w;
}

}  // namespace

std::vector<ObjectSpec> guess_object_specs(const std::string& video_prompt) {
    std::vector<std::string> words;
    std::string word;
    for (char ch : video_prompt + " ") {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            word += static_cast<char>(std::tolower(c));
        } else if (!word.empty()) {
            words.push_back(word);
            word.clear();
        }
    }
    static const std::map<std::string, int> counts{{"a", 1},     {"an", 1},   {"the", 1},   {"one", 1},
                                                   {"two", 2},   {"three", 3}, {"four", 4}, {"five", 5},
                                                   {"six", 6},   {"seven", 7}, {"eight", 8}, {"nine", 9},
                                                   {"ten", 10}};
    static const std::set<std::string> adjectives{"red",   "green", "blue",  "yellow", "white", "black",
                                                  "brown", "orange", "purple", "pink",  "gray",  "grey",
                                                  "small", "big",   "large", "little", "tiny",  "huge",
                                                  "old",   "young", "cute",  "fluffy", "shiny"};
    static const std::map<std::string, Direction> motions{
        {"left", Direction::left},      {"leftward", Direction::left},  {"right", Direction::right},
        {"rightward", Direction::right}, {"up", Direction::up},          {"upward", Direction::up},
        {"rising", Direction::up},      {"rises", Direction::up},       {"climbing", Direction::up},
        {"down", Direction::down},      {"downward", Direction::down},  {"falling", Direction::down},
        {"falls", Direction::down},     {"sinking", Direction::down},   {"sinks", Direction::down},
        {"dropping", Direction::down}};

    Direction direction = Direction::none;
    // Explicit left/right/up/down wins over verbs like "sinking".
    for (const std::string& w : words)
        if (w == "left" || w == "right" || w == "up" || w == "down") {
            direction = motions.at(w);
            break;
        }
    if (direction == Direction::none)
        for (const std::string& w : words)
            if (const auto it = motions.find(w); it != motions.end()) {
                direction = it->second;
                break;
            }

    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
        const auto c = counts.find(words[i]);
        int n = 0;
        if (c != counts.end())
            n = c->second;
        else if (std::all_of(words[i].begin(), words[i].end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }) &&
                 words[i].size() < 4)
            n = std::stoi(words[i]);
        if (n < 1)
            continue;
        std::size_t j = i + 1;
        while (j + 1 < words.size() && adjectives.count(words[j]))
            ++j;
        if (counts.count(words[j]) || motions.count(words[j]))
            continue;
        return {ObjectSpec{n > 1 ? singular(words[j]) : words[j], n, direction}};
    }
    return {ObjectSpec{"object", 1, direction}};
}

LayoutPlan fallback_plan(const std::string& video_prompt, int frame_count, const std::vector<ObjectSpec>& specs) {
    check(frame_count >= 1, ErrorCode::config, "frame count must be positive");
    int total = 0;
    for (const ObjectSpec& s : specs) {
        check(!s.name.empty(), ErrorCode::config, "object spec has an empty name");
        check(s.count >= 1, ErrorCode::config, fmt::format("object '{}' has count {}", s.name, s.count));
        total += s.count;
    }

    constexpr double kMargin = 0.05;
    constexpr double kMinBoxWidth = 0.03;
    constexpr double kBandCenter = 0.62;
    constexpr double kTravel = 0.3;
    const double slot = total > 0 ? (1.0 - 2.0 * kMargin) / total : 1.0;
    const double box_w = std::min(0.2, 0.75 * slot);
    if (total > 0 && box_w < kMinBoxWidth)
        fail(ErrorCode::layout, fmt::format("{} objects do not fit side by side: box width {:.4f} is below {}",
                                            total, box_w, kMinBoxWidth));
    const double box_h = std::min(0.3, std::max(box_w, 0.12));

    LayoutPlan plan;
    plan.reasoning = fmt::format("fallback layout: {} object(s) side by side on a horizontal band", total);
    for (int i = 0; i < frame_count; ++i)
        plan.frames.push_back(FramePlan{i, fmt::format("{} (frame {})", video_prompt, i), {}});

    int slot_index = 0;
    for (const ObjectSpec& spec : specs) {
        for (int k = 1; k <= spec.count; ++k, ++slot_index) {
            const std::string name = spec.count == 1 ? spec.name : fmt::format("{}#{}", spec.name, k);
            const double cx0 = kMargin + slot * (slot_index + 0.5);
            const double h_travel = std::min(kTravel, slot - box_w);
            for (int i = 0; i < frame_count; ++i) {
                const double s = frame_count > 1 ? static_cast<double>(i) / (frame_count - 1) : 0.0;
                double cx = cx0;
                double cy = kBandCenter;
                switch (spec.direction) {
                case Direction::left:
                    cx = cx0 + h_travel * (0.5 - s);
                    break;
                case Direction::right:
                    cx = cx0 - h_travel * (0.5 - s);
                    break;
                case Direction::up:
                    cy = kBandCenter + kTravel * (0.5 - s);
                    break;
                case Direction::down:
                    cy = kBandCenter - kTravel * (0.5 - s);
                    break;
                case Direction::none:
                    break;
                }
                // Shift, never shrink, to stay inside the frame.
                cx = std::clamp(cx, box_w / 2, 1.0 - box_w / 2);
                cy = std::clamp(cy, box_h / 2, 1.0 - box_h / 2);
                plan.frames[static_cast<std::size_t>(i)].placements.push_back(
                    {name, {std::max(0.0, cx - box_w / 2), std::max(0.0, cy - box_h / 2),
                            std::min(1.0, cx + box_w / 2), std::min(1.0, cy + box_h / 2)}});
            }
        }
    }
    refresh_objects(plan);
    return plan;
}

}  // namespace vsketch
