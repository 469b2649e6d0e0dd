// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsketch/codec.hpp"
#include "vsketch/compositor.hpp"
#include "vsketch/gateway.hpp"
#include "vsketch/planner.hpp"
#include "vsketch/schedule.hpp"
#include "vsketch/solver.hpp"

namespace vsketch {

class MockModelServer;

enum class BackgroundStrategy { t2i_then_i2v, direct_t2v };
std::string to_string(BackgroundStrategy strategy);
/// "t2i_i2v" or "t2v".
BackgroundStrategy parse_background_strategy(const std::string& text);

/// gaussian: local closed-form predictor; remote: the denoise service.
enum class DenoiserKind { gaussian, remote };
std::string to_string(DenoiserKind kind);
DenoiserKind parse_denoiser_kind(const std::string& text);

struct RunConfig {
    std::string video_prompt;
    int frame_count = 8;
    int width = 64;
    int height = 48;
    double fps = 8.0;
    BackgroundStrategy background_strategy = BackgroundStrategy::t2i_then_i2v;
    /// Fixed inversion ratio; nullopt means the LLM picks it.
    std::optional<double> alpha;
    AlphaRange backend_range{0.7, 0.9};
    SamplerOptions sampler;
    CodecSpec codec;
    SchedulePreset schedule;
    DenoiserKind denoiser = DenoiserKind::gaussian;
    double denoiser_mu = 0.0;
    double denoiser_sigma = 0.5;
    std::uint64_t seed = 0;
    bool use_fallback_planner = false;
    /// Objects for the fallback planner; guessed from the prompt when empty.
    std::vector<ObjectSpec> objects;
    double max_step = kDefaultMaxStep;
    double box_threshold = kBoxThreshold;
    std::string chat_model;
    /// Start an in-process mock server and point every endpoint at it.
    bool mock = false;
    EndpointSet endpoints;
    GatewayOptions gateway;
    std::filesystem::path out_dir = "out";
    /// Reuse stage outputs recorded in an existing manifest when the stage
    /// input hash matches.
    bool use_cache = true;

    /// Throws a config error on invalid settings.
    void validate() const;
    /// Everything except endpoint URLs, tokens and the output directory.
    nlohmann::json to_json() const;
};

/// An artifact file with its content hash; paths are relative to out_dir.
struct ArtifactRef {
    std::string path;
    std::string sha256;

    bool operator==(const ArtifactRef&) const = default;
};

struct StageRecord {
    std::string name;
    std::string input_hash;
    /// Config slice that went into input_hash.
    nlohmann::json config;
    /// Upstream artifacts read by this stage.
    std::vector<ArtifactRef> consumed;
    std::vector<ArtifactRef> outputs;
    std::map<std::string, std::uint64_t> seeds;
    std::map<std::string, std::string> template_ids;
    std::vector<CallRecord> calls;
    double seconds = 0.0;
    bool cached = false;
    /// Stage-specific results such as the resolved alpha.
    nlohmann::json extra = nlohmann::json::object();
};

struct PipelineManifest {
    std::string mode = "run";
    nlohmann::json config;
    std::map<std::string, std::string> template_ids;
    /// In execution order.
    std::vector<StageRecord> stages;
    std::optional<double> alpha;
    std::optional<int> t_inv;

    const StageRecord* find(const std::string& stage) const;
    nlohmann::json to_json() const;
    static PipelineManifest from_json(const nlohmann::json& j);
};

PipelineManifest read_manifest(const std::filesystem::path& path);

/// Checks every artifact file against its hash, that each consumed artifact
/// was produced by an earlier stage with the same hash, and that each
/// resolved alpha lies in its range and maps to the recorded t_inv. Returns
/// one line per problem; empty means the manifest is complete.
std::vector<std::string> verify_manifest(const PipelineManifest& manifest, const std::filesystem::path& out_dir);

struct RunResult {
    PixelVideo final_video;
    PipelineManifest manifest;
};

struct SweepPoint {
    double alpha = 0.0;
    int t_inv = 0;
    /// L2 distance between the sampled latent and the sketch latent.
    double sketch_distance = 0.0;
    std::string final_dir;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    PipelineManifest manifest;
};

/// Three-stage orchestration: background, sketch, guided generation.
/// Stages persist their outputs under out_dir and record themselves in the
/// manifest, which is written after every stage.
class Pipeline {
public:
    /// With cfg.mock and no gateway, starts a mock server. Otherwise uses the
    /// given gateway, or builds one from cfg.endpoints.
    explicit Pipeline(RunConfig cfg, ModelGateway* gateway = nullptr);
    ~Pipeline();
    Pipeline(const Pipeline&) = delete;
    Pipeline& operator=(const Pipeline&) = delete;

    PixelVideo stage1_background();
    VideoSketch stage2_sketch(const PixelVideo& background);
    PixelVideo stage3_generate(const VideoSketch& sketch);

    RunResult run();
    /// Pure-noise generation from T with no background or sketch.
    RunResult baseline();
    /// Stages 1 and 2 once, then stage 3 for each fixed alpha.
    SweepResult sweep(const std::vector<double>& alphas);

    const RunConfig& config() const { return m_cfg; }
    const PipelineManifest& manifest() const { return m_manifest; }
    ModelGateway& gateway() { return *m_gateway; }

private:
    struct Generated {
        PixelVideo video;
        LatentVideo sample;
        LatentVideo sketch_latent;
    };

    Generated generate(const VideoSketch& sketch, const std::string& stage_name, const std::string& subdir,
                       std::optional<double> fixed_alpha);
    std::unique_ptr<Denoiser> make_denoiser();
    const StageRecord* cached_stage(const std::string& name, const std::string& input_hash) const;
    void record(StageRecord stage);
    void write_manifest() const;
    std::filesystem::path path_of(const std::string& rel) const { return m_cfg.out_dir / rel; }
    ArtifactRef artifact(const std::string& rel) const;

    RunConfig m_cfg;
    std::unique_ptr<MockModelServer> m_mock;
    std::unique_ptr<ModelGateway> m_own_gateway;
    ModelGateway* m_gateway = nullptr;
    PipelineManifest m_manifest;
    std::optional<PipelineManifest> m_previous;
};

}  // namespace vsketch
