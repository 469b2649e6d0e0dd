// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "vsketch/digest.hpp"
#include "vsketch/frame_io.hpp"
#include "vsketch/mock_server.hpp"
#include "vsketch/rng.hpp"

namespace vsketch {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kStaticCamera = " The camera is static; only the scene itself may change.";

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string hash_json(const json& j) {
    return sha256_hex(j.dump());
}

json artifacts_to_json(const std::vector<ArtifactRef>& refs) {
    json out = json::array();
    for (const ArtifactRef& r : refs)
        out.push_back({{"path", r.path}, {"sha256", r.sha256}});
    return out;
}

std::vector<ArtifactRef> artifacts_from_json(const json& j) {
    std::vector<ArtifactRef> out;
    for (const json& r : j)
        out.push_back({r.at("path").get<std::string>(), r.at("sha256").get<std::string>()});
    return out;
}

std::vector<CallRecord> calls_from_json(const json& j) {
    std::vector<CallRecord> out;
    for (const json& r : j)
        out.push_back({parse_service_kind(r.at("kind").get<std::string>()), r.at("path").get<std::string>(),
                       r.at("status").get<int>(), r.at("retries").get<int>(), r.at("latency_ms").get<double>(),
                       r.at("request_sha256").get<std::string>(), r.at("response_sha256").get<std::string>(),
                       r.at("ok").get<bool>()});
    return out;
}

// Frame PNGs among a stage's outputs, in order.
std::vector<ArtifactRef> frame_outputs(const StageRecord& stage) {
    std::vector<ArtifactRef> out;
    for (const ArtifactRef& r : stage.outputs)
        if (r.path.ends_with(".png") && r.path.find("/frame_") != std::string::npos)
            out.push_back(r);
    return out;
}

std::string safe_name(const std::string& name) {
    std::string out;
    for (char c : name)
        out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out.empty() ? "object" : out;
}

void quantize_frames(PixelVideo& video) {
    for (Image& f : video.frames)
        f = quantize8(f);
}

json specs_to_json(const std::vector<ObjectSpec>& specs) {
    json out = json::array();
    for (const ObjectSpec& s : specs)
        out.push_back({{"name", s.name}, {"count", s.count}, {"direction", to_string(s.direction)}});
    return out;
}

json sampler_to_json(const SamplerOptions& s) {
    return {{"kind", to_string(s.kind)}, {"num_steps", s.num_steps}, {"grid", to_string(s.grid)}};
}

VideoSketch sketch_from_disk(const std::filesystem::path& dir, const std::filesystem::path& json_path) {
    VideoSketch sketch;
    sketch.frames = read_frame_directory(dir);
    const json j = json::parse(read_text(json_path));
    for (const json& f : j.at("frames")) {
        std::vector<Placement> list;
        for (const json& p : f.at("placements")) {
            const json& b = p.at("box");
            list.push_back({p.at("name").get<std::string>(),
                            {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()}});
        }
        sketch.placements.push_back(std::move(list));
    }
    sketch.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
    return sketch;
}

}  // namespace

std::string to_string(BackgroundStrategy strategy) {
    return strategy == BackgroundStrategy::t2i_then_i2v ? "t2i_i2v" : "t2v";
}

BackgroundStrategy parse_background_strategy(const std::string& text) {
    if (text == "t2i_i2v" || text == "t2i_then_i2v")
        return BackgroundStrategy::t2i_then_i2v;
    if (text == "t2v" || text == "direct_t2v")
        return BackgroundStrategy::direct_t2v;
    fail(ErrorCode::config, "background strategy must be t2i_i2v or t2v, got '" + text + "'");
}

std::string to_string(DenoiserKind kind) {
    return kind == DenoiserKind::gaussian ? "gaussian" : "remote";
}

DenoiserKind parse_denoiser_kind(const std::string& text) {
    if (text == "gaussian")
        return DenoiserKind::gaussian;
    if (text == "remote")
        return DenoiserKind::remote;
    fail(ErrorCode::config, "denoiser must be gaussian or remote, got '" + text + "'");
}

void RunConfig::validate() const {
    check(!video_prompt.empty(), ErrorCode::config, "video prompt is empty");
    check(frame_count >= 2, ErrorCode::config, fmt::format("frame count must be at least 2, got {}", frame_count));
    check(width >= 1 && height >= 1, ErrorCode::config, fmt::format("size must be positive, got {}x{}", width, height));
    check(fps > 0.0 && std::isfinite(fps), ErrorCode::config, "fps must be positive");
    check(backend_range.lo > 0.0 && backend_range.lo <= backend_range.hi && backend_range.hi < 1.0, ErrorCode::config,
          fmt::format("alpha range must satisfy 0 < lo <= hi < 1, got [{}, {}]", backend_range.lo, backend_range.hi));
    if (alpha) {
        check(std::isfinite(*alpha) && backend_range.contains(*alpha), ErrorCode::config,
              fmt::format("alpha {} is outside the backend range [{}, {}]", *alpha, backend_range.lo,
                          backend_range.hi));
    }
    check(sampler.num_steps >= 1, ErrorCode::config, "solver steps must be at least 1");
    if (codec.kind == CodecKind::patchify)
        check(codec.patch >= 1 && width % codec.patch == 0 && height % codec.patch == 0, ErrorCode::config,
              fmt::format("patch size {} does not divide {}x{}", codec.patch, width, height));
    check(denoiser_sigma > 0.0 && std::isfinite(denoiser_sigma) && std::isfinite(denoiser_mu), ErrorCode::config,
          "denoiser sigma must be positive");
    check(max_step > 0.0, ErrorCode::config, "max step must be positive");
    check(box_threshold >= 0.0 && box_threshold <= 1.0, ErrorCode::config, "box threshold must lie in [0, 1]");
    for (const ObjectSpec& s : objects)
        check(!s.name.empty() && s.count >= 1, ErrorCode::config, "object specs need a name and a positive count");
    schedule.build();
}

json RunConfig::to_json() const {
    return {{"video_prompt", video_prompt},
            {"frame_count", frame_count},
            {"width", width},
            {"height", height},
            {"fps", fps},
            {"background_strategy", to_string(background_strategy)},
            {"alpha", alpha ? json(*alpha) : json("auto")},
            {"backend_range", {backend_range.lo, backend_range.hi}},
            {"sampler", sampler_to_json(sampler)},
            {"codec", codec.id()},
            {"schedule", schedule.to_json()},
            {"denoiser", {{"kind", to_string(denoiser)}, {"mu", denoiser_mu}, {"sigma", denoiser_sigma}}},
            {"seed", seed},
            {"use_fallback_planner", use_fallback_planner},
            {"objects", specs_to_json(objects)},
            {"max_step", max_step},
            {"box_threshold", box_threshold},
            {"chat_model", chat_model},
            {"mock", mock},
            {"transport", to_string(gateway.transport)}};
}

const StageRecord* PipelineManifest::find(const std::string& stage) const {
    for (const StageRecord& s : stages)
        if (s.name == stage)
            return &s;
    return nullptr;
}

json PipelineManifest::to_json() const {
    json stage_list = json::array();
    for (const StageRecord& s : stages)
        stage_list.push_back({{"name", s.name},
                              {"input_hash", s.input_hash},
                              {"config", s.config},
                              {"consumed", artifacts_to_json(s.consumed)},
                              {"outputs", artifacts_to_json(s.outputs)},
                              {"seeds", s.seeds},
                              {"template_ids", s.template_ids},
                              {"calls", CallLog::to_json(s.calls)},
                              {"seconds", s.seconds},
                              {"cached", s.cached},
                              {"extra", s.extra}});
    return {{"format", "vsketch-manifest/1"},
            {"mode", mode},
            {"config", config},
            {"template_ids", template_ids},
            {"stages", stage_list},
            {"alpha", alpha ? json(*alpha) : json(nullptr)},
            {"t_inv", t_inv ? json(*t_inv) : json(nullptr)}};
}

PipelineManifest PipelineManifest::from_json(const json& j) {
    try {
        PipelineManifest m;
        m.mode = j.at("mode").get<std::string>();
        m.config = j.at("config");
        m.template_ids = j.at("template_ids").get<std::map<std::string, std::string>>();
        for (const json& s : j.at("stages")) {
            StageRecord r;
            r.name = s.at("name").get<std::string>();
            r.input_hash = s.at("input_hash").get<std::string>();
            r.config = s.at("config");
            r.consumed = artifacts_from_json(s.at("consumed"));
            r.outputs = artifacts_from_json(s.at("outputs"));
            r.seeds = s.at("seeds").get<std::map<std::string, std::uint64_t>>();
            r.template_ids = s.at("template_ids").get<std::map<std::string, std::string>>();
            r.calls = calls_from_json(s.at("calls"));
            r.seconds = s.at("seconds").get<double>();
            r.cached = s.at("cached").get<bool>();
            r.extra = s.at("extra");
            m.stages.push_back(std::move(r));
        }
        if (j.at("alpha").is_number())
            m.alpha = j.at("alpha").get<double>();
        if (j.at("t_inv").is_number())
            m.t_inv = j.at("t_inv").get<int>();
        return m;
    } catch (const json::exception& e) {
        fail(ErrorCode::manifest, std::string("malformed manifest: ") + e.what());
    }
}

PipelineManifest read_manifest(const std::filesystem::path& path) {
    json j = json::parse(read_text(path), nullptr, false);
    check(!j.is_discarded(), ErrorCode::manifest, "manifest is not valid JSON: " + path.string());
    return PipelineManifest::from_json(j);
}

std::vector<std::string> verify_manifest(const PipelineManifest& manifest, const std::filesystem::path& out_dir) {
    std::vector<std::string> problems;
    std::map<std::string, std::string> produced;
    for (const StageRecord& s : manifest.stages) {
        for (const ArtifactRef& a : s.consumed) {
            const auto it = produced.find(a.path);
            if (it == produced.end())
                problems.push_back(fmt::format("{}: consumes {} which no earlier stage produced", s.name, a.path));
            else if (it->second != a.sha256)
                problems.push_back(fmt::format("{}: consumed {} with a different hash than produced", s.name, a.path));
        }
        for (const ArtifactRef& a : s.outputs) {
            const auto path = out_dir / a.path;
            if (!std::filesystem::exists(path))
                problems.push_back(fmt::format("{}: output {} is missing", s.name, a.path));
            else if (sha256_file(path) != a.sha256)
                problems.push_back(fmt::format("{}: output {} does not match its hash", s.name, a.path));
            produced[a.path] = a.sha256;
        }
        if (s.extra.contains("alpha")) {
            try {
                const double alpha = s.extra.at("alpha").get<double>();
                const auto range = s.extra.at("alpha_range");
                const AlphaRange r{range[0].get<double>(), range[1].get<double>()};
                if (!r.contains(alpha))
                    problems.push_back(fmt::format("{}: alpha {} is outside [{}, {}]", s.name, alpha, r.lo, r.hi));
                const json& sc = manifest.config.at("schedule");
                const NoiseSchedule schedule =
                    make_schedule(sc.at("num_steps").get<int>(), sc.at("beta_start").get<double>(),
                                  sc.at("beta_end").get<double>(),
                                  parse_beta_schedule_kind(sc.at("kind").get<std::string>()));
                const int expected = inversion_timestep(InversionConfig{alpha, r, 0, true}, schedule);
                if (s.extra.at("t_inv").get<int>() != expected)
                    problems.push_back(fmt::format("{}: t_inv {} does not match alpha {} (expected {})", s.name,
                                                   s.extra.at("t_inv").get<int>(), alpha, expected));
            } catch (const std::exception& e) {
                problems.push_back(fmt::format("{}: unreadable alpha record: {}", s.name, e.what()));
            }
        }
    }
    if (manifest.alpha) {
        const StageRecord* g = manifest.find("generate");
        if (!g || !g->extra.contains("alpha") || g->extra.at("alpha").get<double>() != *manifest.alpha ||
            !manifest.t_inv || g->extra.at("t_inv").get<int>() != *manifest.t_inv)
            problems.push_back("resolved alpha and t_inv do not match the generate stage");
    }
    return problems;
}

Pipeline::Pipeline(RunConfig cfg, ModelGateway* gateway) : m_cfg(std::move(cfg)) {
    m_cfg.validate();
    if (gateway) {
        m_gateway = gateway;
    } else if (m_cfg.mock) {
        MockOptions mo;
        mo.denoiser_mu = m_cfg.denoiser_mu;
        mo.denoiser_sigma = m_cfg.denoiser_sigma;
        mo.schedule = m_cfg.schedule;
        m_mock = std::make_unique<MockModelServer>(mo);
        m_own_gateway = std::make_unique<ModelGateway>(EndpointSet::uniform(m_mock->base_url()), m_cfg.gateway);
        m_gateway = m_own_gateway.get();
    } else {
        m_own_gateway = std::make_unique<ModelGateway>(m_cfg.endpoints, m_cfg.gateway);
        m_gateway = m_own_gateway.get();
    }
    std::filesystem::create_directories(m_cfg.out_dir);
    const auto manifest_path = m_cfg.out_dir / "manifest.json";
    if (m_cfg.use_cache && std::filesystem::exists(manifest_path)) {
        try {
            m_previous = read_manifest(manifest_path);
        } catch (const Error& e) {
            spdlog::warn("ignoring previous manifest: {}", e.what());
        }
    }
    m_manifest.config = m_cfg.to_json();
    m_manifest.template_ids = {{"background", background_template().id()},
                               {"plan", plan_template().id()},
                               {"alpha", alpha_template().id()}};
}

Pipeline::~Pipeline() = default;

ArtifactRef Pipeline::artifact(const std::string& rel) const {
    return {rel, sha256_file(path_of(rel))};
}

const StageRecord* Pipeline::cached_stage(const std::string& name, const std::string& input_hash) const {
    if (!m_cfg.use_cache || !m_previous)
        return nullptr;
    const StageRecord* prev = m_previous->find(name);
    if (!prev || prev->input_hash != input_hash || prev->outputs.empty())
        return nullptr;
    for (const ArtifactRef& a : prev->outputs) {
        const auto path = path_of(a.path);
        if (!std::filesystem::exists(path) || sha256_file(path) != a.sha256)
            return nullptr;
    }
    return prev;
}

void Pipeline::record(StageRecord stage) {
    auto it = std::find_if(m_manifest.stages.begin(), m_manifest.stages.end(),
                           [&](const StageRecord& s) { return s.name == stage.name; });
    if (it != m_manifest.stages.end())
        m_manifest.stages.erase(it);
    m_manifest.stages.push_back(std::move(stage));
    write_manifest();
}

void Pipeline::write_manifest() const {
    const auto path = m_cfg.out_dir / "manifest.json";
    auto tmp = path;
    tmp += ".tmp";
    write_text(tmp, m_manifest.to_json().dump(2) + "\n");
    std::filesystem::rename(tmp, path);
}

std::unique_ptr<Denoiser> Pipeline::make_denoiser() {
    if (m_cfg.denoiser == DenoiserKind::remote)
        return std::make_unique<RemoteDenoiser>(*m_gateway);
    return std::make_unique<GaussianDenoiser>(m_cfg.denoiser_mu, m_cfg.denoiser_sigma, m_cfg.schedule.build());
}

PixelVideo Pipeline::stage1_background() {
    StageRecord rec;
    rec.name = "background";
    rec.config = {{"video_prompt", m_cfg.video_prompt}, {"frame_count", m_cfg.frame_count},
                  {"width", m_cfg.width},               {"height", m_cfg.height},
                  {"fps", m_cfg.fps},                   {"strategy", to_string(m_cfg.background_strategy)},
                  {"seed", m_cfg.seed},                 {"chat_model", m_cfg.chat_model},
                  {"mock", m_cfg.mock}};
    rec.template_ids = {{"background", background_template().id()}};
    rec.input_hash = hash_json({{"stage", rec.name}, {"config", rec.config}, {"templates", rec.template_ids}});

    if (const StageRecord* prev = cached_stage(rec.name, rec.input_hash)) {
        spdlog::info("background: inputs unchanged, reusing {}", path_of("background").string());
        StageRecord copy = *prev;
        copy.cached = true;
        record(std::move(copy));
        return read_frame_directory(path_of("background"));
    }

    const auto start = Clock::now();
    const std::size_t mark = m_gateway->log().size();
    rec.seeds = {{"t2i", derive_seed(m_cfg.seed, "background:t2i")},
                 {"i2v", derive_seed(m_cfg.seed, "background:i2v")},
                 {"t2v", derive_seed(m_cfg.seed, "background:t2v")}};

    std::string description;
    try {
        description = m_gateway->chat(user_prompt(build_background_prompt(m_cfg.video_prompt), m_cfg.chat_model));
    } catch (const Error& e) {
        throw Error(e.code(), std::string("background stage, description: ") + e.what());
    }
    std::filesystem::create_directories(path_of("background"));
    write_text(path_of("background/description.txt"), description);

    PixelVideo video;
    try {
        if (m_cfg.background_strategy == BackgroundStrategy::t2i_then_i2v) {
            const Image still = m_gateway->text_to_image(description, m_cfg.width, m_cfg.height, rec.seeds["t2i"]);
            video = m_gateway->image_to_video(still, description + kStaticCamera, m_cfg.frame_count, m_cfg.fps,
                                              rec.seeds["i2v"]);
        } else {
            video = m_gateway->text_to_video(description + kStaticCamera, m_cfg.frame_count, m_cfg.width,
                                             m_cfg.height, m_cfg.fps, rec.seeds["t2v"]);
        }
    } catch (const Error& e) {
        throw Error(e.code(), std::string("background stage, video: ") + e.what());
    }
    video.fps = m_cfg.fps;
    quantize_frames(video);
    const auto paths = write_frame_directory(path_of("background"), video);
    for (std::size_t i = 0; i < paths.size(); ++i)
        rec.outputs.push_back(artifact("background/" + frame_file_name(i)));
    rec.outputs.push_back(artifact("background/index.json"));
    rec.outputs.push_back(artifact("background/description.txt"));
    rec.calls = m_gateway->log().since(mark);
    rec.seconds = seconds_since(start);
    record(std::move(rec));
    return video;
}

VideoSketch Pipeline::stage2_sketch(const PixelVideo& background) {
    StageRecord rec;
    rec.name = "sketch";
    rec.config = {{"video_prompt", m_cfg.video_prompt},
                  {"frame_count", m_cfg.frame_count},
                  {"seed", m_cfg.seed},
                  {"use_fallback_planner", m_cfg.use_fallback_planner},
                  {"objects", specs_to_json(m_cfg.objects)},
                  {"max_step", m_cfg.max_step},
                  {"box_threshold", m_cfg.box_threshold},
                  {"chat_model", m_cfg.chat_model},
                  {"mock", m_cfg.mock}};
    if (const StageRecord* bg = m_manifest.find("background"))
        rec.consumed = frame_outputs(*bg);
    else
        for (std::size_t i = 0; i < background.frames.size(); ++i)
            rec.consumed.push_back({"background/" + frame_file_name(i), sha256_hex(encode_png(background.frames[i]))});
    if (!m_cfg.use_fallback_planner)
        rec.template_ids = {{"plan", plan_template().id()}};
    rec.input_hash = hash_json({{"stage", rec.name},
                                {"config", rec.config},
                                {"consumed", artifacts_to_json(rec.consumed)},
                                {"templates", rec.template_ids}});

    if (const StageRecord* prev = cached_stage(rec.name, rec.input_hash)) {
        spdlog::info("sketch: inputs unchanged, reusing {}", path_of("sketch").string());
        StageRecord copy = *prev;
        copy.cached = true;
        record(std::move(copy));
        return sketch_from_disk(path_of("sketch"), path_of("sketch.json"));
    }

    const auto start = Clock::now();
    const std::size_t mark = m_gateway->log().size();
    const int n = m_cfg.frame_count;
    std::filesystem::create_directories(path_of("sprites"));

    // Scene objects give the planner something to place the new objects on.
    std::vector<std::string> tags;
    std::vector<DetectedObject> scene;
    try {
        tags = m_gateway->tag_image(background.frames.front());
        if (!tags.empty())
            scene = m_gateway->detect(background.frames.front(), tags, m_cfg.box_threshold);
    } catch (const Error& e) {
        throw Error(e.code(), std::string("sketch stage, scene detection: ") + e.what());
    }
    json scene_json = json::array();
    for (const DetectedObject& d : scene)
        scene_json.push_back({{"label", d.label}, {"box", {d.box.x1, d.box.y1, d.box.x2, d.box.y2}},
                              {"confidence", d.confidence}});
    write_text(path_of("detections.json"), json{{"tags", tags}, {"objects", scene_json}}.dump(2) + "\n");

    LayoutPlan plan;
    std::string raw;
    if (m_cfg.use_fallback_planner) {
        const auto specs = m_cfg.objects.empty() ? guess_object_specs(m_cfg.video_prompt) : m_cfg.objects;
        plan = fallback_plan(m_cfg.video_prompt, n, specs);
        raw = serialize_plan(plan).dump(2);
        plan = validate_plan(plan, n, m_cfg.max_step);
    } else {
        try {
            raw = m_gateway->chat(user_prompt(build_plan_prompt(m_cfg.video_prompt, scene, n), m_cfg.chat_model));
        } catch (const Error& e) {
            throw Error(e.code(), std::string("sketch stage, planning: ") + e.what());
        }
        write_text(path_of("plan_response.txt"), raw);
        try {
            plan = validate_plan(parse_layout_plan(raw, n), n, m_cfg.max_step);
        } catch (const Error& e) {
            throw Error(e.code(), fmt::format("sketch stage, plan rejected: {}\nraw response (saved to {}):\n{}",
                                              e.what(), path_of("plan_response.txt").string(), raw));
        }
    }
    plan = interpolate_trajectory(plan, n);

    // One sprite per distinct object; instances share it.
    std::vector<std::string> names;
    for (const std::string& name : plan.objects) {
        const std::string base = base_object_name(name);
        if (std::find(names.begin(), names.end(), base) == names.end())
            names.push_back(base);
    }
    const int side = std::max(m_cfg.width, m_cfg.height);
    std::vector<std::future<Sprite>> jobs;
    for (const std::string& name : names) {
        const std::uint64_t seed = derive_seed(m_cfg.seed, "sprite:" + name);
        rec.seeds["sprite:" + name] = seed;
        jobs.push_back(std::async(std::launch::async, [this, name, seed, side] {
            const std::string prompt = "An image of " + name;
            const Image img = quantize8(m_gateway->text_to_image(prompt, side, side, seed));
            const auto found = m_gateway->detect(img, {name}, m_cfg.box_threshold);
            BBox box{0.2, 0.2, 0.8, 0.8};
            double best = -1.0;
            for (const DetectedObject& d : found)
                if (d.confidence > best) {
                    best = d.confidence;
                    box = d.box;
                }
            Mask mask = m_gateway->segment(img, box);
            return extract_sprite(img, mask, prompt);
        }));
    }
    std::map<std::string, Sprite> sprites;
    for (std::size_t i = 0; i < names.size(); ++i) {
        try {
            sprites[names[i]] = jobs[i].get();
        } catch (const Error& e) {
            for (std::size_t k = i + 1; k < jobs.size(); ++k)
                jobs[k].wait();
            throw Error(e.code(), fmt::format("sketch stage, sprite '{}': {}", names[i], e.what()));
        }
        const std::string stem = "sprites/" + safe_name(names[i]);
        write_png(path_of(stem + ".png"), sprites[names[i]].color);
        write_png(path_of(stem + "_mask.png"), sprites[names[i]].alpha);
        rec.outputs.push_back(artifact(stem + ".png"));
        rec.outputs.push_back(artifact(stem + "_mask.png"));
    }

    VideoSketch sketch = assemble_sketch(background, sprites, plan);
    sketch.frames.fps = m_cfg.fps;
    quantize_frames(sketch.frames);
    const auto paths = write_frame_directory(path_of("sketch"), sketch.frames);
    json plan_json = serialize_plan(plan);
    write_text(path_of("plan.json"), plan_json.dump(2) + "\n");
    write_text(path_of("sketch.json"), sketch_to_json(sketch).dump(2) + "\n");
    for (std::size_t i = 0; i < paths.size(); ++i)
        rec.outputs.push_back(artifact("sketch/" + frame_file_name(i)));
    for (const char* rel : {"sketch/index.json", "plan.json", "sketch.json", "detections.json"})
        rec.outputs.push_back(artifact(rel));
    if (!m_cfg.use_fallback_planner)
        rec.outputs.push_back(artifact("plan_response.txt"));
    rec.extra = {{"planner", m_cfg.use_fallback_planner ? "fallback" : "llm"}, {"objects", plan.objects}};
    rec.calls = m_gateway->log().since(mark);
    rec.seconds = seconds_since(start);
    record(std::move(rec));
    return sketch;
}

Pipeline::Generated Pipeline::generate(const VideoSketch& sketch, const std::string& stage_name,
                                       const std::string& subdir, std::optional<double> fixed_alpha) {
    StageRecord rec;
    rec.name = stage_name;
    rec.config = {{"video_prompt", m_cfg.video_prompt},
                  {"codec", m_cfg.codec.id()},
                  {"sampler", sampler_to_json(m_cfg.sampler)},
                  {"schedule", m_cfg.schedule.to_json()},
                  {"alpha", fixed_alpha ? json(*fixed_alpha) : json("auto")},
                  {"backend_range", {m_cfg.backend_range.lo, m_cfg.backend_range.hi}},
                  {"denoiser", {{"kind", to_string(m_cfg.denoiser)}, {"mu", m_cfg.denoiser_mu},
                                {"sigma", m_cfg.denoiser_sigma}}},
                  {"seed", m_cfg.seed},
                  {"chat_model", m_cfg.chat_model},
                  {"mock", m_cfg.mock},
                  {"out", subdir}};
    if (const StageRecord* sk = m_manifest.find("sketch"))
        rec.consumed = frame_outputs(*sk);
    else
        for (std::size_t i = 0; i < sketch.frames.frames.size(); ++i)
            rec.consumed.push_back({"sketch/" + frame_file_name(i), sha256_hex(encode_png(sketch.frames.frames[i]))});
    if (!fixed_alpha)
        rec.template_ids = {{"alpha", alpha_template().id()}};
    rec.input_hash = hash_json({{"stage", rec.name},
                                {"config", rec.config},
                                {"consumed", artifacts_to_json(rec.consumed)},
                                {"templates", rec.template_ids}});

    if (const StageRecord* prev = cached_stage(rec.name, rec.input_hash)) {
        spdlog::info("{}: inputs unchanged, reusing {}", stage_name, path_of(subdir).string());
        StageRecord copy = *prev;
        copy.cached = true;
        record(std::move(copy));
        return {read_frame_directory(path_of(subdir)), {}, {}};
    }

    const auto start = Clock::now();
    const std::size_t mark = m_gateway->log().size();
    std::unique_ptr<RemoteVae> vae;
    if (m_cfg.codec.kind == CodecKind::remote)
        vae = std::make_unique<RemoteVae>(*m_gateway);

    try {
        const LatentVideo z0 = encode(sketch.frames, m_cfg.codec, vae.get());

        AlphaSelection sel;
        if (fixed_alpha) {
            sel.alpha = *fixed_alpha;
            sel.source = AlphaSource::fixed;
        } else {
            GatewayChat llm(*m_gateway);
            sel = select_alpha(m_cfg.video_prompt, m_cfg.backend_range, llm);
            std::filesystem::create_directories(path_of(subdir));
            write_text(path_of(subdir + "/alpha_response.txt"), sel.response);
        }
        const NoiseSchedule schedule = m_cfg.schedule.build();
        const InversionConfig inversion{sel.alpha, m_cfg.backend_range, derive_seed(m_cfg.seed, "inversion"), true};
        const int t_inv = inversion_timestep(inversion, schedule);
        rec.seeds = {{"inversion", inversion.seed}, {"sampler", derive_seed(m_cfg.seed, "sampler")}};

        const LatentVideo z_init = forward_noise(z0, t_inv, schedule, inversion.seed);
        const auto denoiser = make_denoiser();
        SamplerOptions opts = m_cfg.sampler;
        opts.seed = rec.seeds["sampler"];
        opts.conditioning = m_cfg.video_prompt;
        LatentVideo z = sample_from(z_init, t_inv, *denoiser, schedule, opts);

        PixelVideo video = decode(z, m_cfg.codec, m_cfg.fps, vae.get());
        video.fps = m_cfg.fps;
        quantize_frames(video);
        const auto paths = write_frame_directory(path_of(subdir), video);
        for (std::size_t i = 0; i < paths.size(); ++i)
            rec.outputs.push_back(artifact(subdir + "/" + frame_file_name(i)));
        rec.outputs.push_back(artifact(subdir + "/index.json"));
        if (!fixed_alpha)
            rec.outputs.push_back(artifact(subdir + "/alpha_response.txt"));

        const double distance = l2_distance(z, z0);
        rec.extra = {{"alpha", sel.alpha},
                     {"alpha_source", to_string(sel.source)},
                     {"alpha_range", {m_cfg.backend_range.lo, m_cfg.backend_range.hi}},
                     {"t_inv", t_inv},
                     {"sketch_distance", distance}};
        rec.calls = m_gateway->log().since(mark);
        rec.seconds = seconds_since(start);
        record(std::move(rec));
        return {std::move(video), std::move(z), z0};
    } catch (const Error& e) {
        throw Error(e.code(), fmt::format("{} stage: {}", stage_name, e.what()));
    }
}

PixelVideo Pipeline::stage3_generate(const VideoSketch& sketch) {
    Generated g = generate(sketch, "generate", "final", m_cfg.alpha);
    const StageRecord* rec = m_manifest.find("generate");
    m_manifest.alpha = rec->extra.at("alpha").get<double>();
    m_manifest.t_inv = rec->extra.at("t_inv").get<int>();
    write_manifest();
    return std::move(g.video);
}

RunResult Pipeline::run() {
    m_manifest.mode = "run";
    const PixelVideo background = stage1_background();
    const VideoSketch sketch = stage2_sketch(background);
    PixelVideo final_video = stage3_generate(sketch);
    return {std::move(final_video), m_manifest};
}

RunResult Pipeline::baseline() {
    m_manifest.mode = "baseline";
    StageRecord rec;
    rec.name = "baseline";
    rec.config = {{"video_prompt", m_cfg.video_prompt},
                  {"frame_count", m_cfg.frame_count},
                  {"width", m_cfg.width},
                  {"height", m_cfg.height},
                  {"codec", m_cfg.codec.id()},
                  {"sampler", sampler_to_json(m_cfg.sampler)},
                  {"schedule", m_cfg.schedule.to_json()},
                  {"denoiser", {{"kind", to_string(m_cfg.denoiser)}, {"mu", m_cfg.denoiser_mu},
                                {"sigma", m_cfg.denoiser_sigma}}},
                  {"seed", m_cfg.seed},
                  {"mock", m_cfg.mock}};
    rec.input_hash = hash_json({{"stage", rec.name}, {"config", rec.config}});
    if (const StageRecord* prev = cached_stage(rec.name, rec.input_hash)) {
        StageRecord copy = *prev;
        copy.cached = true;
        record(std::move(copy));
        return {read_frame_directory(path_of("final")), m_manifest};
    }

    const auto start = Clock::now();
    const std::size_t mark = m_gateway->log().size();
    std::unique_ptr<RemoteVae> vae;
    if (m_cfg.codec.kind == CodecKind::remote)
        vae = std::make_unique<RemoteVae>(*m_gateway);
    try {
        LatentShape shape = latent_shape(m_cfg.codec, static_cast<std::size_t>(m_cfg.frame_count), m_cfg.width,
                                         m_cfg.height);
        if (vae) {
            // The service decides the latent shape; probe it with a gray clip.
            PixelVideo probe;
            probe.fps = m_cfg.fps;
            probe.frames.assign(static_cast<std::size_t>(m_cfg.frame_count), Image(m_cfg.width, m_cfg.height, 0.5f));
            shape = vae->encode(probe).shape();
        }
        const NoiseSchedule schedule = m_cfg.schedule.build();
        rec.seeds = {{"init", derive_seed(m_cfg.seed, "baseline")}, {"sampler", derive_seed(m_cfg.seed, "sampler")}};
        const std::string codec_id = vae ? "remote" : m_cfg.codec.id();
        const LatentVideo z_init = standard_normal_like(LatentVideo(shape, codec_id), rec.seeds["init"]);
        const auto denoiser = make_denoiser();
        SamplerOptions opts = m_cfg.sampler;
        opts.seed = rec.seeds["sampler"];
        opts.conditioning = m_cfg.video_prompt;
        const LatentVideo z = sample_from(z_init, schedule.num_steps(), *denoiser, schedule, opts);
        PixelVideo video = decode(z, m_cfg.codec, m_cfg.fps, vae.get());
        video.fps = m_cfg.fps;
        quantize_frames(video);
        const auto paths = write_frame_directory(path_of("final"), video);
        for (std::size_t i = 0; i < paths.size(); ++i)
            rec.outputs.push_back(artifact("final/" + frame_file_name(i)));
        rec.outputs.push_back(artifact("final/index.json"));
        rec.extra = {{"t_start", schedule.num_steps()}};
        rec.calls = m_gateway->log().since(mark);
        rec.seconds = seconds_since(start);
        record(std::move(rec));
        return {std::move(video), m_manifest};
    } catch (const Error& e) {
        throw Error(e.code(), std::string("baseline: ") + e.what());
    }
}

SweepResult Pipeline::sweep(const std::vector<double>& alphas) {
    check(!alphas.empty(), ErrorCode::config, "sweep needs at least one alpha");
    for (double a : alphas)
        check(std::isfinite(a) && m_cfg.backend_range.contains(a), ErrorCode::config,
              fmt::format("sweep alpha {} is outside the backend range [{}, {}]", a, m_cfg.backend_range.lo,
                          m_cfg.backend_range.hi));
    m_manifest.mode = "sweep";
    const PixelVideo background = stage1_background();
    const VideoSketch sketch = stage2_sketch(background);
    SweepResult result;
    json summary = json::array();
    for (double a : alphas) {
        const std::string tag = fmt::format("{:.3f}", a);
        const std::string stage = "generate@" + tag;
        const std::string dir = "sweep/alpha_" + tag;
        generate(sketch, stage, dir, a);
        const StageRecord* rec = m_manifest.find(stage);
        SweepPoint p{a, rec->extra.at("t_inv").get<int>(), rec->extra.at("sketch_distance").get<double>(), dir};
        summary.push_back({{"alpha", p.alpha}, {"t_inv", p.t_inv}, {"sketch_distance", p.sketch_distance},
                           {"final_dir", p.final_dir}});
        result.points.push_back(p);
    }
    write_text(path_of("sweep.json"), summary.dump(2) + "\n");
    result.manifest = m_manifest;
    return result;
}

}  // namespace vsketch
