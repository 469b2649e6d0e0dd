// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "vsketch/error.hpp"
#include "vsketch/planner.hpp"

using namespace vsketch;
using nlohmann::json;

namespace {

class CannedChat : public ChatClient {
public:
    explicit CannedChat(std::string reply) : m_reply(std::move(reply)) {}
    std::string chat(const ChatRequest& request) override {
        last = request;
        return m_reply;
    }
    ChatRequest last;

private:
    std::string m_reply;
};

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::config;
}

// The JSON literal that follows a "(JSON string): " label in a rendered prompt.
std::string embedded_prompt(const std::string& rendered) {
    const std::string label = "(JSON string): ";
    const auto at = rendered.find(label);
    const auto start = at + label.size();
    const auto end = rendered.find('\n', start);
    return json::parse(rendered.substr(start, end - start)).get<std::string>();
}

std::string random_text(std::mt19937& gen) {
    static const std::vector<std::string> pieces{"cat", " ", "\"", "{", "}", "\\", "\xc3\xa9", "#2", "\n", "box", "[", ":"};
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::uniform_int_distribution<int> len(1, 6);
    std::string s;
    for (int i = len(gen); i > 0; --i)
        s += pieces[pick(gen)];
    return s;
}

BBox random_box(std::mt19937& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double a = u(gen), b = u(gen), c = u(gen), d = u(gen);
    if (a == b)
        b = std::min(1.0, a + 0.1);
    if (c == d)
        d = std::min(1.0, c + 0.1);
    return {std::min(a, b), std::min(c, d), std::max(a, b), std::max(c, d)};
}

LayoutPlan random_plan(std::mt19937& gen) {
    std::uniform_int_distribution<int> nframes(1, 5);
    std::uniform_int_distribution<int> nobj(0, 3);
    LayoutPlan plan;
    const int n = nframes(gen);
    for (int i = 0; i < n; ++i) {
        FramePlan f{i * 2, random_text(gen), {}};
        const int k = nobj(gen);
        for (int m = 0; m < k; ++m)
            f.placements.push_back({random_text(gen) + std::to_string(m), random_box(gen)});
        plan.frames.push_back(f);
    }
    plan.reasoning = random_text(gen);
    if (gen() % 2)
        plan.alpha = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
    refresh_objects(plan);
    return plan;
}

// A plan whose objects move by small steps and never vanish.
LayoutPlan smooth_plan(std::mt19937& gen, int frames) {
    std::uniform_real_distribution<double> u(0.25, 0.5);
    std::uniform_real_distribution<double> step(-0.03, 0.03);
    LayoutPlan plan;
    for (int i = 0; i < frames; ++i)
        plan.frames.push_back(FramePlan{i, "", {}});
    for (int m = 0; m < 3; ++m) {
        double x = u(gen), y = u(gen);
        for (int i = 0; i < frames; ++i) {
            plan.frames[static_cast<std::size_t>(i)].placements.push_back(
                {"obj" + std::to_string(m), {x, y, x + 0.2, y + 0.2}});
            x += step(gen);
            y += step(gen);
        }
    }
    refresh_objects(plan);
    return plan;
}

LayoutPlan parse_and_validate(const std::string& text, int frame_count) {
    return validate_plan(parse_layout_plan(text, frame_count), frame_count);
}

}  // namespace

TEST(TemplateTest, IdsAreVersionedAndHashed) {
    for (const PromptTemplate* t : {&background_template(), &plan_template(), &alpha_template()}) {
        const std::string id = t->id();
        EXPECT_EQ(id.rfind(t->name + "@v1:", 0), 0u) << id;
        EXPECT_EQ(id.size(), t->name.size() + 4 + 12);
    }
    EXPECT_NE(background_template().id(), plan_template().id());
}

TEST(TemplateTest, UnknownPlaceholderIsAnError) {
    const PromptTemplate t{"t", 1, "a {{x}} b {{y}}"};
    EXPECT_EQ(render_template(t, {{"x", "1"}, {"y", "2"}}), "a 1 b 2");
    EXPECT_THROW(render_template(t, {{"x", "1"}}), Error);
}

TEST(TemplateTest, SubstitutionIsSinglePass) {
    const PromptTemplate t{"t", 1, "[{{x}}]"};
    EXPECT_EQ(render_template(t, {{"x", "{{x}}"}}), "[{{x}}]");
}

TEST(BackgroundPromptTest, ContainsInstructionAndPrompt) {
    const std::string prompt = "A cat sinking to the left in the living room";
    const std::string r = build_background_prompt(prompt);
    EXPECT_NE(r.find("Describe only the background scenery"), std::string::npos);
    EXPECT_NE(r.find("Leave out every object that moves"), std::string::npos);
    EXPECT_NE(r.find("The camera is static"), std::string::npos);
    EXPECT_NE(r.find(prompt), std::string::npos);
    EXPECT_EQ(embedded_prompt(r), prompt);
}

TEST(BackgroundPromptTest, EmptyPromptIsAnError) {
    EXPECT_THROW(build_background_prompt(""), Error);
}

TEST(BackgroundPromptTest, TemplateBreakingCharactersRoundTrip) {
    for (const std::string p : {"a {{prompt}} b", "quote \" and \\ backslash", "}}{{boxes}}", "line\nbreak", "tab\t{x}"}) {
        const std::string r = build_background_prompt(p);
        EXPECT_EQ(embedded_prompt(r), p);
    }
}

TEST(PlanPromptTest, BoxSerialization) {
    EXPECT_EQ(format_detected_box({"path", {0.44, 0.57, 0.99, 0.99}, 0.8}),
              R"({"label": "path", "box": [0.44, 0.57, 0.99, 0.99]})");
    const std::string r = build_plan_prompt("a dog runs", {{"path", {0.44, 0.57, 0.99, 0.99}, 0.8}}, 8);
    EXPECT_NE(r.find(R"({"label": "path", "box": [0.44, 0.57, 0.99, 0.99]})"), std::string::npos);
}

TEST(PlanPromptTest, EmptyBoxesAndFrameCount) {
    const std::string r = build_plan_prompt("a dog runs", {}, 16);
    EXPECT_NE(r.find("no detected objects"), std::string::npos);
    EXPECT_NE(r.find("Number of frames: 16"), std::string::npos);
    EXPECT_EQ(embedded_prompt(r), "a dog runs");
    EXPECT_THROW(build_plan_prompt("a dog runs", {}, 1), Error);
}

TEST(PlanPromptTest, LabelIsEscaped) {
    const std::string line = format_detected_box({"say \"hi\"", {0.0, 0.25, 0.5, 1.0}, 1.0});
    const json j = json::parse(line);
    EXPECT_EQ(j["label"], "say \"hi\"");
    EXPECT_EQ(j["box"][1], 0.25);
}

TEST(ParsePlanTest, WellFormedTwoFrames) {
    const auto c = vsketch::testing::plan_corpus()[0];
    const LayoutPlan plan = parse_layout_plan(c.text, 2);
    ASSERT_EQ(plan.frames.size(), 2u);
    EXPECT_EQ(plan.frames[0].caption, "cat on the right");
    EXPECT_EQ(plan.frames[1].placements[0].box, (BBox{0.5, 0.5, 0.7, 0.8}));
    EXPECT_EQ(plan.objects, std::vector<std::string>{"cat"});
    EXPECT_EQ(plan.reasoning, "the cat sits on the floor");
}

TEST(ParsePlanTest, ProseAroundJsonParsesIdentically) {
    const auto corpus = vsketch::testing::plan_corpus();
    EXPECT_EQ(parse_layout_plan(corpus[0].text, 2), parse_layout_plan(corpus[1].text, 2));
    EXPECT_EQ(parse_layout_plan(corpus[0].text, 2), parse_layout_plan(corpus[2].text, 2));
}

TEST(ParsePlanTest, InvertedBoxNamesFrameAndObject) {
    try {
        parse_layout_plan(R"({"frames": [{"index": 0, "placements": [["a", [0.1, 0.1, 0.2, 0.2]]]},)"
                          R"( {"index": 1, "placements": [["a", [0.1, 0.1, 0.2, 0.2]], ["b", [0.5, 0.5, 0.4, 0.9]]]}]})",
                          2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::schema);
        EXPECT_NE(std::string(e.what()).find("x1 >= x2 at frame 1, object 1"), std::string::npos) << e.what();
    }
}

TEST(ParsePlanTest, PixelCoordinatesNormalized) {
    const LayoutPlan plan = parse_layout_plan(vsketch::testing::plan_corpus()[5].text, 2);
    EXPECT_DOUBLE_EQ(plan.frames[0].placements[0].box.x1, 0.1);
    EXPECT_DOUBLE_EQ(plan.frames[0].placements[0].box.y2, 0.9);
    const LayoutPlan arr = parse_layout_plan(
        R"({"size": [200, 100], "frames": [{"placements": [["a", [20, 10, 100, 50]]]}]})", 2);
    EXPECT_EQ(arr.frames[0].placements[0].box, (BBox{0.1, 0.1, 0.5, 0.5}));
}

TEST(ParsePlanTest, MarginIsClampedNotRejected) {
    const LayoutPlan plan = parse_layout_plan(vsketch::testing::plan_corpus()[6].text, 2);
    EXPECT_EQ(plan.frames[0].placements[0].box.x1, 0.0);
    EXPECT_EQ(plan.frames[0].placements[1].box.x2, 1.0);
    EXPECT_EQ(code_of([] { parse_layout_plan(R"({"frames": [{"placements": [["a", [-0.03, 0, 0.5, 0.5]]]}]})", 2); }),
              ErrorCode::schema);
}

TEST(ParsePlanTest, MoreFramesThanVideoIsAnError) {
    EXPECT_EQ(code_of([] { parse_layout_plan(vsketch::testing::plan_corpus()[0].text, 1); }), ErrorCode::schema);
}

TEST(ParsePlanTest, Corpus) {
    for (const auto& c : vsketch::testing::plan_corpus()) {
        SCOPED_TRACE(c.name);
        if (c.error) {
            EXPECT_EQ(code_of([&] { parse_and_validate(c.text, c.frame_count); }), *c.error);
        } else {
            EXPECT_EQ(parse_and_validate(c.text, c.frame_count).frames.size(), c.frames);
        }
    }
}

TEST(ParsePlanTest, SerializeRoundTrip) {
    std::mt19937 gen(5);
    for (int i = 0; i < 300; ++i) {
        const LayoutPlan plan = random_plan(gen);
        const json j = serialize_plan(plan);
        EXPECT_EQ(parse_layout_plan(j.dump(), 0), plan) << j.dump();
        EXPECT_EQ(parse_layout_plan(j.dump(2), 0), plan);
    }
}

TEST(ValidatePlanTest, JumpToCornerBreaksContinuity) {
    // Centers (0.5, 0.5) -> (0.95, 0.95): |d| = 0.45 * sqrt(2) = 0.636, which
    // is 0.45 of the unit-square diagonal.
    LayoutPlan plan;
    plan.frames = {FramePlan{0, "", {{"ball", {0.4, 0.4, 0.6, 0.6}}}},
                   FramePlan{1, "", {{"ball", {0.9, 0.9, 1.0, 1.0}}}}};
    refresh_objects(plan);
    try {
        validate_plan(plan, 2, 0.25);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::continuity);
        EXPECT_NE(std::string(e.what()).find("'ball'"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("frames 0 and 1"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("0.450"), std::string::npos) << e.what();
    }
    EXPECT_NO_THROW(validate_plan(plan, 2, 0.4501));
    EXPECT_THROW(validate_plan(plan, 2, 0.4499), Error);
}

TEST(ValidatePlanTest, StepLimitScalesWithFrameGap) {
    LayoutPlan plan;
    plan.frames = {FramePlan{0, "", {{"a", {0.0, 0.0, 0.2, 0.2}}}}, FramePlan{4, "", {{"a", {0.6, 0.0, 0.8, 0.2}}}}};
    refresh_objects(plan);
    // 0.6 / sqrt(2) = 0.424 over 4 frame steps
    EXPECT_NO_THROW(validate_plan(plan, 8, 0.11));
    EXPECT_THROW(validate_plan(plan, 8, 0.1), Error);
}

TEST(ValidatePlanTest, StraightLinePassesUnchanged) {
    LayoutPlan plan;
    for (int i = 0; i < 6; ++i)
        plan.frames.push_back(FramePlan{i, "f", {{"egg", {0.1 * i, 0.4, 0.1 * i + 0.2, 0.6}}}});
    refresh_objects(plan);
    EXPECT_EQ(validate_plan(plan, 6), plan);
}

TEST(ValidatePlanTest, VanishAndReappear) {
    LayoutPlan plan;
    plan.frames = {FramePlan{0, "", {{"fox", {0.1, 0.1, 0.3, 0.3}}}}, FramePlan{1, "", {}},
                   FramePlan{2, "", {{"fox", {0.1, 0.1, 0.3, 0.3}}}}};
    refresh_objects(plan);
    try {
        validate_plan(plan, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::continuity);
        EXPECT_NE(std::string(e.what()).find("vanishes at frame 1 and reappears at frame 2"), std::string::npos);
    }
    // Appearing late or leaving for good is fine.
    plan.frames[0].placements.clear();
    EXPECT_NO_THROW(validate_plan(plan, 3));
}

TEST(ValidatePlanTest, IndicesSortedRenumberedOrRejected) {
    LayoutPlan plan;
    plan.frames = {FramePlan{7, "b", {}}, FramePlan{3, "a", {}}};
    const LayoutPlan v = validate_plan(plan, 2);
    EXPECT_EQ(v.frames[0].caption, "a");
    EXPECT_EQ(v.frames[0].index, 0);
    EXPECT_EQ(v.frames[1].index, 1);
    EXPECT_EQ(code_of([&] { validate_plan(plan, 5); }), ErrorCode::schema);
    plan.frames[0].index = 3;
    EXPECT_EQ(code_of([&] { validate_plan(plan, 2); }), ErrorCode::schema);
}

TEST(ValidatePlanTest, Idempotent) {
    std::mt19937 gen(7);
    for (int i = 0; i < 100; ++i) {
        LayoutPlan plan = smooth_plan(gen, 2 + i % 6);
        std::shuffle(plan.frames.begin(), plan.frames.end(), gen);
        for (auto& f : plan.frames)
            f.index += 1;  // one-based, renumbered on first pass
        const LayoutPlan once = validate_plan(plan, static_cast<int>(plan.frames.size()));
        EXPECT_EQ(validate_plan(once, static_cast<int>(plan.frames.size())), once);
    }
}

TEST(InterpolateTest, LinearMidpoint) {
    LayoutPlan plan;
    plan.frames = {FramePlan{0, "", {{"a", {0.0, 0.1, 0.2, 0.3}}}}, FramePlan{2, "", {{"a", {0.4, 0.1, 0.6, 0.3}}}}};
    refresh_objects(plan);
    const LayoutPlan out = interpolate_trajectory(plan, 3);
    ASSERT_EQ(out.frames.size(), 3u);
    EXPECT_DOUBLE_EQ(out.frames[1].placements[0].box.x1, 0.2);
    EXPECT_DOUBLE_EQ(out.frames[1].placements[0].box.x2, 0.4);
    EXPECT_EQ(out.frames[1].index, 1);
}

TEST(InterpolateTest, FullPlanUnchanged) {
    std::mt19937 gen(3);
    const LayoutPlan plan = smooth_plan(gen, 5);
    EXPECT_EQ(interpolate_trajectory(plan, 5), plan);
}

TEST(InterpolateTest, SingleKeyframeHolds) {
    LayoutPlan plan;
    plan.frames = {FramePlan{2, "", {{"a", {0.1, 0.2, 0.3, 0.4}}}}};
    refresh_objects(plan);
    const LayoutPlan out = interpolate_trajectory(plan, 6);
    ASSERT_EQ(out.frames.size(), 6u);
    for (const FramePlan& f : out.frames)
        EXPECT_EQ(f.placements.at(0).box, (BBox{0.1, 0.2, 0.3, 0.4}));
}

TEST(InterpolateTest, KeyframesPreservedAndBoxesInUnitSquare) {
    std::mt19937 gen(9);
    std::uniform_int_distribution<int> count(2, 12);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = count(gen);
        LayoutPlan plan;
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), gen);
        idx.resize(static_cast<std::size_t>(1 + static_cast<int>(gen() % static_cast<unsigned>(n))));
        for (int i : idx) {
            FramePlan f{i, "", {}};
            for (int m = 0; m < 3; ++m)
                if (gen() % 3)
                    f.placements.push_back({"o" + std::to_string(m), random_box(gen)});
            plan.frames.push_back(f);
        }
        refresh_objects(plan);
        const LayoutPlan out = interpolate_trajectory(plan, n);
        ASSERT_EQ(out.frames.size(), static_cast<std::size_t>(n));
        for (const FramePlan& key : plan.frames)
            EXPECT_EQ(out.frames[static_cast<std::size_t>(key.index)], key);
        for (const FramePlan& f : out.frames) {
            for (const Placement& p : f.placements) {
                EXPECT_GE(p.box.x1, 0.0);
                EXPECT_GE(p.box.y1, 0.0);
                EXPECT_LE(p.box.x2, 1.0);
                EXPECT_LE(p.box.y2, 1.0);
            }
        }
    }
}

TEST(SelectAlphaTest, Examples) {
    CannedChat a("0.7");
    EXPECT_DOUBLE_EQ(select_alpha("an egg moving left", {0.5, 0.8}, a).alpha, 0.7);
    CannedChat b("0.95");
    EXPECT_DOUBLE_EQ(select_alpha("an egg moving left", {0.7, 0.9}, b).alpha, 0.9);
    CannedChat c("I think medium");
    const AlphaSelection sel = select_alpha("an egg moving left", {0.7, 0.9}, c);
    EXPECT_DOUBLE_EQ(sel.alpha, 0.8);
    EXPECT_EQ(sel.source, AlphaSource::fallback);
    EXPECT_EQ(sel.response, "I think medium");
}

TEST(SelectAlphaTest, PromptCarriesRangeAndPrior) {
    CannedChat chat(R"({"alpha": 0.75})");
    const AlphaSelection sel = select_alpha("a flower blooming", {0.7, 0.9}, chat);
    EXPECT_EQ(sel.source, AlphaSource::json_field);
    ASSERT_EQ(chat.last.messages.size(), 1u);
    const std::string& p = chat.last.messages[0].text;
    EXPECT_EQ(p, sel.prompt);
    EXPECT_NE(p.find("between 0.7 and 0.9"), std::string::npos);
    EXPECT_NE(p.find("lower ratio adds less noise"), std::string::npos);
    EXPECT_NE(p.find("changing its state"), std::string::npos);
    EXPECT_EQ(embedded_prompt(p), "a flower blooming");
}

TEST(SelectAlphaTest, RangeMustBeInsideOpenUnitInterval) {
    CannedChat chat("0.5");
    for (const AlphaRange r : {AlphaRange{0.0, 0.5}, AlphaRange{0.5, 1.0}, AlphaRange{0.8, 0.7}, AlphaRange{-0.1, 0.5}})
        EXPECT_EQ(code_of([&] { select_alpha("x", r, chat); }), ErrorCode::config);
}

TEST(SelectAlphaTest, AdversarialCorpus) {
    const auto corpus = vsketch::testing::alpha_corpus();
    ASSERT_EQ(corpus.size(), 50u);
    for (const auto& c : corpus) {
        CannedChat chat(c.response);
        const double a = select_alpha("prompt", {c.lo, c.hi}, chat).alpha;
        EXPECT_GE(a, c.lo) << c.response;
        EXPECT_LE(a, c.hi) << c.response;
        EXPECT_DOUBLE_EQ(a, c.expected) << c.response.substr(0, 80);
    }
}

TEST(SelectAlphaTest, RandomResponsesStayInRange) {
    std::mt19937 gen(13);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int i = 0; i < 500; ++i) {
        std::string s;
        for (int k = byte(gen) % 40; k > 0; --k)
            s += static_cast<char>(i % 2 ? byte(gen) : "0123456789.-+eE{}\"alph: "[byte(gen) % 24]);
        double lo = u(gen), hi = u(gen);
        if (lo > hi)
            std::swap(lo, hi);
        CannedChat chat(s);
        const double a = select_alpha("p", {lo, hi}, chat).alpha;
        EXPECT_TRUE(a >= lo && a <= hi) << s;
    }
}

TEST(FallbackPlanTest, EggMovesLeft) {
    const LayoutPlan plan = fallback_plan("an egg moving left", 8, {{"egg", 1, Direction::left}});
    ASSERT_EQ(plan.frames.size(), 8u);
    for (std::size_t i = 1; i < 8; ++i)
        EXPECT_LT(plan.frames[i].placements[0].box.center_x(), plan.frames[i - 1].placements[0].box.center_x());
    EXPECT_EQ(plan.objects, std::vector<std::string>{"egg"});
    EXPECT_NO_THROW(validate_plan(plan, 8));
}

TEST(FallbackPlanTest, ThreeStaticNonOverlapping) {
    const LayoutPlan plan = fallback_plan("three cups", 5, {{"cup", 3, Direction::none}});
    EXPECT_EQ(plan.objects, (std::vector<std::string>{"cup#1", "cup#2", "cup#3"}));
    for (const FramePlan& f : plan.frames) {
        ASSERT_EQ(f.placements.size(), 3u);
        EXPECT_EQ(f.placements, plan.frames[0].placements);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = a + 1; b < 3; ++b)
                EXPECT_LE(f.placements[a].box.x2, f.placements[b].box.x1);
    }
}

TEST(FallbackPlanTest, TooManyObjects) {
    EXPECT_EQ(code_of([] { fallback_plan("balls", 4, {{"ball", 50, Direction::none}}); }), ErrorCode::layout);
}

TEST(FallbackPlanTest, AlwaysValidAndDisjoint) {
    const Direction dirs[] = {Direction::left, Direction::right, Direction::up, Direction::down, Direction::none};
    for (int frames : {2, 3, 16})
        for (int n = 1; n <= 8; ++n) {
            std::vector<ObjectSpec> specs;
            for (int k = 0; k < n; ++k)
                specs.push_back({"o" + std::to_string(k), 1, dirs[k % 5]});
            const LayoutPlan plan = fallback_plan("p", frames, specs);
            EXPECT_EQ(validate_plan(plan, frames), plan);
            for (const FramePlan& f : plan.frames)
                for (std::size_t a = 0; a < f.placements.size(); ++a) {
                    EXPECT_TRUE(f.placements[a].box.valid());
                    for (std::size_t b = a + 1; b < f.placements.size(); ++b)
                        EXPECT_LE(f.placements[a].box.x2, f.placements[b].box.x1 + 1e-12);
                }
        }
}

TEST(FallbackPlanTest, Deterministic) {
    const std::vector<ObjectSpec> specs{{"egg", 2, Direction::right}, {"cup", 1, Direction::up}};
    EXPECT_EQ(fallback_plan("p", 9, specs), fallback_plan("p", 9, specs));
}

TEST(ObjectSpecTest, ParseAndGuess) {
    EXPECT_EQ(parse_object_spec("egg:1:left"), (ObjectSpec{"egg", 1, Direction::left}));
    EXPECT_EQ(parse_object_spec("cup:3"), (ObjectSpec{"cup", 3, Direction::none}));
    EXPECT_EQ(parse_object_spec("fox"), (ObjectSpec{"fox", 1, Direction::none}));
    EXPECT_THROW(parse_object_spec("egg:0"), Error);
    EXPECT_THROW(parse_object_spec("egg:1:sideways"), Error);
    EXPECT_THROW(parse_object_spec(":1"), Error);

    EXPECT_EQ(guess_object_specs("an egg moving left"), (std::vector<ObjectSpec>{{"egg", 1, Direction::left}}));
    EXPECT_EQ(guess_object_specs("A cat sinking to the left in the living room"),
              (std::vector<ObjectSpec>{{"cat", 1, Direction::left}}));
    EXPECT_EQ(guess_object_specs("three red balls rolling right"),
              (std::vector<ObjectSpec>{{"ball", 3, Direction::right}}));
    EXPECT_EQ(guess_object_specs("two foxes running left").front().name, "fox");
    EXPECT_EQ(guess_object_specs("2 puppies").front().name, "puppy");
    EXPECT_EQ(guess_object_specs("two glasses").front().name, "glass");
    EXPECT_EQ(guess_object_specs("two houses").front().name, "house");
    EXPECT_EQ(guess_object_specs("A balloon rising"), (std::vector<ObjectSpec>{{"balloon", 1, Direction::up}}));
    EXPECT_EQ(guess_object_specs(""), (std::vector<ObjectSpec>{{"object", 1, Direction::none}}));
}
