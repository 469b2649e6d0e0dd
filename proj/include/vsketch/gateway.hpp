// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsketch/chat.hpp"
#include "vsketch/codec.hpp"
#include "vsketch/denoiser.hpp"
#include "vsketch/error.hpp"
#include "vsketch/image.hpp"
#include "vsketch/layout.hpp"
#include "vsketch/wire.hpp"

namespace vsketch {

enum class ServiceKind { chat, t2i, i2v, t2v, tag, detect, segment, vae, denoise };
std::string to_string(ServiceKind kind);
ServiceKind parse_service_kind(const std::string& text);
const std::vector<ServiceKind>& all_service_kinds();

struct ServiceEndpoint {
    ServiceKind kind = ServiceKind::chat;
    std::string base_url;
    double timeout_s = 30.0;
    int max_retries = 2;
    std::optional<std::string> auth_token;
    std::string model;

    void validate() const;
};

/// One endpoint per service kind.
class EndpointSet {
public:
    /// Every kind at the same base URL.
    static EndpointSet uniform(const std::string& base_url, double timeout_s = 30.0, int max_retries = 2);

    /// VSKETCH_<KIND>_URL and VSKETCH_<KIND>_TOKEN override url and token,
    /// e.g. VSKETCH_CHAT_URL. A URL override for a kind not yet present adds it.
    void apply_env();

    void set(ServiceEndpoint endpoint);
    const ServiceEndpoint& at(ServiceKind kind) const;
    bool has(ServiceKind kind) const { return m_endpoints.count(kind) != 0; }

    /// Tokens are omitted.
    nlohmann::json to_json() const;

private:
    std::map<ServiceKind, ServiceEndpoint> m_endpoints;
};

enum class GatewayFailure { timeout, http, payload, connection };
std::string to_string(GatewayFailure failure);

class GatewayError : public Error {
public:
    GatewayError(GatewayFailure failure, ServiceKind kind, double elapsed_s, int status, const std::string& message);

    GatewayFailure failure() const { return m_failure; }
    ServiceKind kind() const { return m_kind; }
    double elapsed_s() const { return m_elapsed; }
    int status() const { return m_status; }

private:
    GatewayFailure m_failure;
    ServiceKind m_kind;
    double m_elapsed;
    int m_status;
};

struct CallRecord {
    ServiceKind kind;
    std::string path;
    int status = 0;
    int retries = 0;
    double latency_ms = 0.0;
    std::string request_sha256;
    std::string response_sha256;
    bool ok = false;
};

/// Thread-safe append-only list of calls.
class CallLog {
public:
    void add(CallRecord record);
    std::vector<CallRecord> records() const;
    std::size_t size() const;
    /// Records added since the given position.
    std::vector<CallRecord> since(std::size_t position) const;
    static nlohmann::json to_json(const std::vector<CallRecord>& records);

private:
    mutable std::mutex m_mutex;
    std::vector<CallRecord> m_records;
};

struct GatewayOptions {
    ImageTransport transport = ImageTransport::inline_png;
    std::filesystem::path scratch_dir;
    double backoff_base_ms = 50.0;
    double backoff_max_ms = 2000.0;
    int parallelism = 4;
};

/// Default detector confidence cut.
constexpr double kBoxThreshold = 0.35;

/// Client for all external model services. Safe for concurrent calls; at most
/// options.parallelism requests are in flight at once.
class ModelGateway {
public:
    explicit ModelGateway(EndpointSet endpoints, GatewayOptions options = {});

    std::string chat(const ChatRequest& request);
    Image text_to_image(const std::string& prompt, int width, int height, std::uint64_t seed);
    PixelVideo image_to_video(const Image& image, const std::string& prompt, int frame_count, double fps,
                              std::uint64_t seed);
    PixelVideo text_to_video(const std::string& prompt, int frame_count, int width, int height, double fps,
                             std::uint64_t seed);
    std::vector<std::string> tag_image(const Image& image);
    std::vector<DetectedObject> detect(const Image& image, const std::vector<std::string>& labels,
                                       double box_threshold = kBoxThreshold);
    Mask segment(const Image& image, const BBox& box);
    LatentVideo vae_encode(const PixelVideo& video);
    PixelVideo vae_decode(const LatentVideo& latent, double fps);
    LatentVideo denoise(const LatentVideo& z, double t, std::string_view conditioning);

    CallLog& log() { return m_log; }
    const EndpointSet& endpoints() const { return m_endpoints; }
    const GatewayOptions& options() const { return m_options; }

    /// POSTs body to the kind's endpoint with retries; returns parsed JSON.
    nlohmann::json call(ServiceKind kind, const std::string& path, const nlohmann::json& body);

private:
    EndpointSet m_endpoints;
    GatewayOptions m_options;
    ImageWire m_wire;
    CallLog m_log;
    std::unique_ptr<std::counting_semaphore<>> m_slots;
};

/// ChatClient backed by the gateway.
class GatewayChat : public ChatClient {
public:
    explicit GatewayChat(ModelGateway& gateway) : m_gateway(gateway) {}
    std::string chat(const ChatRequest& request) override { return m_gateway.chat(request); }

private:
    ModelGateway& m_gateway;
};

class RemoteVae : public VaeService {
public:
    explicit RemoteVae(ModelGateway& gateway) : m_gateway(gateway) {}
    LatentVideo encode(const PixelVideo& video) override { return m_gateway.vae_encode(video); }
    PixelVideo decode(const LatentVideo& latent, double fps) override { return m_gateway.vae_decode(latent, fps); }

private:
    ModelGateway& m_gateway;
};

class RemoteDenoiser : public Denoiser {
public:
    explicit RemoteDenoiser(ModelGateway& gateway) : m_gateway(gateway) {}
    LatentVideo predict_noise(const LatentVideo& z, double t, std::string_view conditioning) const override {
        return m_gateway.denoise(z, t, conditioning);
    }

private:
    ModelGateway& m_gateway;
};

}  // namespace vsketch
