// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: run, sweep, baseline, inspect.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "vsketch/pipeline.hpp"

using namespace vsketch;
using nlohmann::json;

namespace {

// Reads a JSON object as a CLI11 config: keys are long option names,
// arrays give repeated values.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (opt->get_lnames().empty() || !opt->get_configurable())
                continue;
            const std::string name = opt->get_lnames().front();
            if (opt->count() > 0) {
                const auto& results = opt->results();
                j[name] = results.size() == 1 ? json(results.front()) : json(results);
            } else if (default_also && !opt->get_default_str().empty()) {
                j[name] = opt->get_default_str();
            }
        }
        return j.dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j = json::parse(input, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw CLI::ConversionError("config file is not a JSON object");
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, items);
        return items;
    }

private:
    static std::string scalar(const json& v) {
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_boolean())
            return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void flatten(const json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                auto next = parents;
                next.push_back(key);
                flatten(value, next, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const json& v : value)
                    item.inputs.push_back(scalar(v));
            } else {
                item.inputs.push_back(scalar(value));
            }
            out.push_back(std::move(item));
        }
    }
};

std::pair<double, double> parse_pair(const std::string& text, char sep, const std::string& what) {
    const auto at = text.find(sep);
    if (at == std::string::npos)
        throw CLI::ValidationError(what, "expected two values separated by '" + std::string(1, sep) + "'");
    try {
        return {std::stod(text.substr(0, at)), std::stod(text.substr(at + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError(what, "not a number pair: " + text);
    }
}

struct Flags {
    std::string prompt;
    int frames = 8;
    std::string size = "64x48";
    double fps = 8.0;
    std::string alpha = "auto";
    std::string alpha_range;
    std::string strategy = "t2i_i2v";
    std::string solver = "dpmpp2";
    int steps = 50;
    std::string grid = "quadratic";
    std::string codec = "identity";
    std::uint64_t seed = 0;
    bool mock = false;
    std::string out = "out";
    bool fallback_planner = false;
    std::vector<std::string> objects;
    std::string denoiser = "gaussian";
    double denoiser_mu = 0.0;
    double denoiser_sigma = 0.5;
    double max_step = kDefaultMaxStep;
    double box_threshold = kBoxThreshold;
    std::string chat_model;
    std::string endpoint;
    double timeout = 30.0;
    int retries = 2;
    std::string transport = "inline";
    int parallelism = 4;
    bool no_cache = false;
    int schedule_steps = 1000;
    double beta_start = 0.0001;
    double beta_end = 0.02;
    std::string beta_schedule = "linear";
    std::vector<double> alphas{0.5, 0.7, 0.9};
    std::string manifest;
    bool verbose = false;
};

RunConfig build_config(const Flags& f) {
    RunConfig cfg;
    cfg.video_prompt = f.prompt;
    cfg.frame_count = f.frames;
    const auto [w, h] = parse_pair(f.size, 'x', "--size");
    cfg.width = static_cast<int>(w);
    cfg.height = static_cast<int>(h);
    cfg.fps = f.fps;
    if (f.alpha != "auto") {
        try {
            cfg.alpha = std::stod(f.alpha);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--alpha", "expected auto or a number, got " + f.alpha);
        }
    }
    if (!f.alpha_range.empty()) {
        const auto [lo, hi] = parse_pair(f.alpha_range, ',', "--alpha-range");
        cfg.backend_range = {lo, hi};
    }
    cfg.background_strategy = parse_background_strategy(f.strategy);
    cfg.sampler.kind = parse_solver_kind(f.solver);
    cfg.sampler.num_steps = f.steps;
    cfg.sampler.grid = parse_step_grid(f.grid);
    cfg.codec = CodecSpec::parse(f.codec);
    cfg.seed = f.seed;
    cfg.mock = f.mock;
    cfg.out_dir = f.out;
    cfg.use_fallback_planner = f.fallback_planner;
    for (const std::string& o : f.objects)
        cfg.objects.push_back(parse_object_spec(o));
    cfg.denoiser = parse_denoiser_kind(f.denoiser);
    cfg.denoiser_mu = f.denoiser_mu;
    cfg.denoiser_sigma = f.denoiser_sigma;
    cfg.max_step = f.max_step;
    cfg.box_threshold = f.box_threshold;
    cfg.chat_model = f.chat_model;
    cfg.schedule = {f.schedule_steps, f.beta_start, f.beta_end, parse_beta_schedule_kind(f.beta_schedule)};
    cfg.use_cache = !f.no_cache;
    cfg.gateway.transport = parse_image_transport(f.transport);
    cfg.gateway.parallelism = f.parallelism;
    cfg.gateway.scratch_dir = std::filesystem::path(f.out) / "scratch";
    if (!f.endpoint.empty())
        cfg.endpoints = EndpointSet::uniform(f.endpoint, f.timeout, f.retries);
    cfg.endpoints.apply_env();
    return cfg;
}

void print_run(const RunConfig& cfg, const PipelineManifest& m) {
    fmt::print("final frames: {}\n", (cfg.out_dir / "final").string());
    if (m.alpha)
        fmt::print("alpha: {} (t_inv {})\n", *m.alpha, m.t_inv.value_or(0));
    for (const StageRecord& s : m.stages)
        fmt::print("  {:<16} {:>8.3f} s  {:>3} calls{}\n", s.name, s.seconds, s.calls.size(),
                   s.cached ? "  (cached)" : "");
    fmt::print("manifest: {}\n", (cfg.out_dir / "manifest.json").string());
}

int inspect(const std::string& path_text) {
    std::filesystem::path path = path_text;
    if (std::filesystem::is_directory(path))
        path /= "manifest.json";
    const PipelineManifest m = read_manifest(path);
    fmt::print("mode: {}\n", m.mode);
    if (m.config.contains("video_prompt"))
        fmt::print("prompt: {}\n", m.config.at("video_prompt").get<std::string>());
    for (const auto& [name, id] : m.template_ids)
        fmt::print("template {}: {}\n", name, id);
    if (m.alpha)
        fmt::print("alpha: {} (t_inv {})\n", *m.alpha, m.t_inv.value_or(0));
    for (const StageRecord& s : m.stages) {
        fmt::print("stage {}: {} outputs, {} consumed, {} calls, {:.3f} s{}\n", s.name, s.outputs.size(),
                   s.consumed.size(), s.calls.size(), s.seconds, s.cached ? ", cached" : "");
        fmt::print("  input hash {}\n", s.input_hash);
        if (!s.extra.empty())
            fmt::print("  {}\n", s.extra.dump());
    }
    const auto problems = verify_manifest(m, path.parent_path().empty() ? "." : path.parent_path());
    if (problems.empty()) {
        fmt::print("manifest verified\n");
        return 0;
    }
    for (const std::string& p : problems)
        fmt::print(stderr, "problem: {}\n", p);
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vsketch: sketch-guided video generation"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;

    // A .json config file gets the JSON reader; anything else is TOML.
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config" && std::string(argv[i + 1]).ends_with(".json"))
            app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "TOML or JSON file with option values; flags override it");

    app.add_option("--prompt", f.prompt, "Video description");
    app.add_option("--frames", f.frames, "Frame count")->check(CLI::Range(2, 100000));
    app.add_option("--size", f.size, "Frame size WxH");
    app.add_option("--fps", f.fps, "Frames per second");
    app.add_option("--alpha", f.alpha, "Noise ratio, or auto to ask the LLM");
    app.add_option("--alpha-range", f.alpha_range, "Backend alpha range lo,hi (default 0.7,0.9)");
    app.add_option("--strategy", f.strategy, "Background strategy: t2i_i2v or t2v");
    app.add_option("--solver", f.solver, "dpmpp2 or ddpm");
    app.add_option("--steps", f.steps, "dpmpp2 steps for a full sweep");
    app.add_option("--grid", f.grid, "dpmpp2 step grid: quadratic, uniform or log_snr");
    app.add_option("--codec", f.codec, "identity, patchify:p or remote");
    app.add_option("--seed", f.seed, "Base seed");
    app.add_flag("--mock", f.mock, "Serve every model from an in-process mock");
    app.add_option("--out", f.out, "Output directory");
    app.add_flag("--fallback-planner", f.fallback_planner, "Plan layouts without the LLM");
    app.add_option("--object", f.objects, "Fallback planner object name[:count[:direction]]");
    app.add_option("--denoiser", f.denoiser, "gaussian or remote");
    app.add_option("--denoiser-mu", f.denoiser_mu, "Gaussian denoiser mean");
    app.add_option("--denoiser-sigma", f.denoiser_sigma, "Gaussian denoiser std");
    app.add_option("--max-step", f.max_step, "Largest allowed box jump per frame, fraction of the diagonal");
    app.add_option("--box-threshold", f.box_threshold, "Detector confidence cut");
    app.add_option("--chat-model", f.chat_model, "Model name sent to the chat service");
    app.add_option("--endpoint", f.endpoint, "Base URL for every service (VSKETCH_<KIND>_URL overrides)");
    app.add_option("--timeout", f.timeout, "Per-request timeout in seconds");
    app.add_option("--retries", f.retries, "Retries for transient failures");
    app.add_option("--transport", f.transport, "Image transport: inline or path");
    app.add_option("--parallelism", f.parallelism, "Concurrent service calls");
    app.add_flag("--no-cache", f.no_cache, "Recompute every stage");
    app.add_option("--schedule-steps", f.schedule_steps, "Diffusion steps T");
    app.add_option("--beta-start", f.beta_start, "First beta");
    app.add_option("--beta-end", f.beta_end, "Last beta");
    app.add_option("--beta-schedule", f.beta_schedule, "linear or scaled_linear");
    app.add_flag("-v,--verbose", f.verbose, "Debug logging");

    CLI::App* run = app.add_subcommand("run", "Background, sketch and guided generation");
    CLI::App* sweep = app.add_subcommand("sweep", "Run generation for several fixed alphas");
    sweep->add_option("--alphas", f.alphas, "Alpha values")->delimiter(',');
    CLI::App* baseline = app.add_subcommand("baseline", "Generate from pure noise, no sketch");
    CLI::App* insp = app.add_subcommand("inspect", "Summarize and verify a manifest");
    insp->add_option("manifest", f.manifest, "manifest.json or its directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    spdlog::set_level(f.verbose ? spdlog::level::debug : spdlog::level::info);

    try {
        if (insp->parsed())
            return inspect(f.manifest);
        if (f.prompt.empty())
            throw CLI::RequiredError("--prompt");
        RunConfig cfg = build_config(f);
        if (sweep->parsed() && f.alpha_range.empty() && !f.alphas.empty()) {
            const auto [lo, hi] = std::minmax_element(f.alphas.begin(), f.alphas.end());
            cfg.backend_range = {*lo, *hi};
        }
        Pipeline pipeline(cfg);
        if (run->parsed()) {
            const RunResult r = pipeline.run();
            print_run(cfg, r.manifest);
        } else if (baseline->parsed()) {
            const RunResult r = pipeline.baseline();
            print_run(cfg, r.manifest);
        } else if (sweep->parsed()) {
            const SweepResult r = pipeline.sweep(f.alphas);
            for (const SweepPoint& p : r.points)
                fmt::print("alpha {:.3f}  t_inv {:>5}  sketch distance {:.4f}  {}\n", p.alpha, p.t_inv,
                           p.sketch_distance, (cfg.out_dir / p.final_dir).string());
        }
        return 0;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const Error& e) {
        fmt::print(stderr, "error ({}): {}\n", to_string(e.code()), e.what());
        return e.code() == ErrorCode::config ? 2 : 1;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
}
