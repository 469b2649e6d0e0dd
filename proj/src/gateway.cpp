// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/gateway.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "vsketch/digest.hpp"
#include "vsketch/frame_io.hpp"

namespace vsketch {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

const std::vector<std::pair<ServiceKind, const char*>> kKindNames = {
    {ServiceKind::chat, "chat"},       {ServiceKind::t2i, "t2i"},         {ServiceKind::i2v, "i2v"},
    {ServiceKind::t2v, "t2v"},         {ServiceKind::tag, "tag"},         {ServiceKind::detect, "detect"},
    {ServiceKind::segment, "segment"}, {ServiceKind::vae, "vae"},         {ServiceKind::denoise, "denoise"},
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// "http://host:port/prefix" -> ("http://host:port", "/prefix")
std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme = url.find("://");
    const auto slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash == std::string::npos)
        return {url, ""};
    std::string prefix = url.substr(slash);
    while (!prefix.empty() && prefix.back() == '/')
        prefix.pop_back();
    return {url.substr(0, slash), prefix};
}

std::string error_message(const std::string& body) {
    const json j = json::parse(body, nullptr, false);
    if (j.is_object() && j.contains("error")) {
        const json& e = j.at("error");
        if (e.is_object() && e.contains("message") && e.at("message").is_string())
            return e.at("message").get<std::string>();
        if (e.is_string())
            return e.get<std::string>();
    }
    return body.substr(0, 200);
}

class SlotGuard {
public:
    explicit SlotGuard(std::counting_semaphore<>& slots) : m_slots(slots) { m_slots.acquire(); }
    ~SlotGuard() { m_slots.release(); }
    SlotGuard(const SlotGuard&) = delete;
    SlotGuard& operator=(const SlotGuard&) = delete;

private:
    std::counting_semaphore<>& m_slots;
};

[[noreturn]] void payload_error(ServiceKind kind, const std::string& what) {
    throw GatewayError(GatewayFailure::payload, kind, 0.0, 200,
                       fmt::format("{} response rejected: {}", to_string(kind), what));
}

// Runs a decoder and turns any library error into a payload error.
template <class Fn>
auto decode(ServiceKind kind, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const GatewayError&) {
        throw;
    } catch (const Error& e) {
        payload_error(kind, e.what());
    } catch (const json::exception& e) {
        payload_error(kind, e.what());
    }
}

const json& need(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name))
        fail(ErrorCode::parse, fmt::format("missing \"{}\"", name));
    return j.at(name);
}

}  // namespace

std::string to_string(ServiceKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind)
            return name;
    return "?";
}

ServiceKind parse_service_kind(const std::string& text) {
    for (const auto& [k, name] : kKindNames)
        if (text == name)
            return k;
    fail(ErrorCode::config, "unknown service kind '" + text + "'");
}

const std::vector<ServiceKind>& all_service_kinds() {
    static const std::vector<ServiceKind> kinds = [] {
        std::vector<ServiceKind> out;
        for (const auto& entry : kKindNames)
            out.push_back(entry.first);
        return out;
    }();
    return kinds;
}

void ServiceEndpoint::validate() const {
    check(!base_url.empty(), ErrorCode::config, fmt::format("{} endpoint has no URL", to_string(kind)));
    check(timeout_s > 0.0 && std::isfinite(timeout_s), ErrorCode::config,
          fmt::format("{} endpoint timeout must be positive", to_string(kind)));
    check(max_retries >= 0, ErrorCode::config, fmt::format("{} endpoint retries must be >= 0", to_string(kind)));
}

EndpointSet EndpointSet::uniform(const std::string& base_url, double timeout_s, int max_retries) {
    EndpointSet set;
    for (ServiceKind kind : all_service_kinds())
        set.set(ServiceEndpoint{kind, base_url, timeout_s, max_retries, std::nullopt, {}});
    return set;
}

void EndpointSet::apply_env() {
    for (ServiceKind kind : all_service_kinds()) {
        std::string upper = to_string(kind);
        std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
        if (const char* url = std::getenv(("VSKETCH_" + upper + "_URL").c_str()); url && *url) {
            if (!has(kind))
                m_endpoints[kind] = ServiceEndpoint{kind, url, 30.0, 2, std::nullopt, {}};
            m_endpoints[kind].base_url = url;
        }
        if (const char* token = std::getenv(("VSKETCH_" + upper + "_TOKEN").c_str()); token && *token && has(kind))
            m_endpoints[kind].auth_token = token;
    }
}

void EndpointSet::set(ServiceEndpoint endpoint) {
    endpoint.validate();
    m_endpoints[endpoint.kind] = std::move(endpoint);
}

const ServiceEndpoint& EndpointSet::at(ServiceKind kind) const {
    const auto it = m_endpoints.find(kind);
    if (it == m_endpoints.end())
        fail(ErrorCode::config, fmt::format("no endpoint configured for {}", to_string(kind)));
    return it->second;
}

json EndpointSet::to_json() const {
    json out = json::object();
    for (const auto& [kind, ep] : m_endpoints)
        out[to_string(kind)] = {{"base_url", ep.base_url},
                                {"timeout_s", ep.timeout_s},
                                {"max_retries", ep.max_retries},
                                {"model", ep.model},
                                {"auth", ep.auth_token.has_value()}};
    return out;
}

std::string to_string(GatewayFailure failure) {
    switch (failure) {
    case GatewayFailure::timeout:
        return "timeout";
    case GatewayFailure::http:
        return "http";
    case GatewayFailure::payload:
        return "payload";
    case GatewayFailure::connection:
        return "connection";
    }
    return "?";
}

GatewayError::GatewayError(GatewayFailure failure, ServiceKind kind, double elapsed_s, int status,
                           const std::string& message)
    : Error(ErrorCode::gateway, message), m_failure(failure), m_kind(kind), m_elapsed(elapsed_s), m_status(status) {}

void CallLog::add(CallRecord record) {
    std::lock_guard lock(m_mutex);
    m_records.push_back(std::move(record));
}

std::vector<CallRecord> CallLog::records() const {
    std::lock_guard lock(m_mutex);
    return m_records;
}

std::size_t CallLog::size() const {
    std::lock_guard lock(m_mutex);
    return m_records.size();
}

std::vector<CallRecord> CallLog::since(std::size_t position) const {
    std::lock_guard lock(m_mutex);
    if (position >= m_records.size())
        return {};
    return {m_records.begin() + static_cast<std::ptrdiff_t>(position), m_records.end()};
}

json CallLog::to_json(const std::vector<CallRecord>& records) {
    json out = json::array();
    for (const CallRecord& r : records)
        out.push_back({{"kind", to_string(r.kind)},
                       {"path", r.path},
                       {"status", r.status},
                       {"ok", r.ok},
                       {"retries", r.retries},
                       {"latency_ms", r.latency_ms},
                       {"request_sha256", r.request_sha256},
                       {"response_sha256", r.response_sha256}});
    return out;
}

ModelGateway::ModelGateway(EndpointSet endpoints, GatewayOptions options)
    : m_endpoints(std::move(endpoints)),
      m_options(std::move(options)),
      m_wire(m_options.transport, m_options.scratch_dir),
      m_slots(std::make_unique<std::counting_semaphore<>>(std::max(1, m_options.parallelism))) {
    check(m_options.parallelism >= 1, ErrorCode::config, "gateway parallelism must be at least 1");
}

json ModelGateway::call(ServiceKind kind, const std::string& path, const json& body) {
    const ServiceEndpoint& ep = m_endpoints.at(kind);
    const std::string payload = body.dump(-1, ' ', false, json::error_handler_t::replace);
    const auto [host, prefix] = split_url(ep.base_url);
    const auto timeout = std::chrono::microseconds(static_cast<long long>(ep.timeout_s * 1e6));

    CallRecord record{kind, path, 0, 0, 0.0, sha256_hex(payload), {}, false};
    SlotGuard slot(*m_slots);
    const auto start = Clock::now();
    for (int attempt = 0;; ++attempt) {
        httplib::Client client(host);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        httplib::Headers headers;
        if (ep.auth_token)
            headers.emplace("Authorization", "Bearer " + *ep.auth_token);
        const auto res = client.Post(prefix + path, headers, payload, "application/json");

        GatewayFailure failure = GatewayFailure::connection;
        bool transient = true;
        std::string detail;
        if (!res) {
            const auto err = res.error();
            const bool timed_out = err == httplib::Error::Read || err == httplib::Error::Write ||
                                   err == httplib::Error::ConnectionTimeout;
            failure = timed_out ? GatewayFailure::timeout : GatewayFailure::connection;
            detail = httplib::to_string(err);
        } else {
            record.status = res->status;
            record.response_sha256 = sha256_hex(res->body);
            if (res->status >= 200 && res->status < 300) {
                json parsed = json::parse(res->body, nullptr, false);
                record.retries = attempt;
                record.latency_ms = 1e3 * seconds_since(start);
                if (parsed.is_discarded() || !parsed.is_object()) {
                    m_log.add(record);
                    throw GatewayError(GatewayFailure::payload, kind, seconds_since(start), res->status,
                                       fmt::format("{} {} returned a body that is not a JSON object",
                                                   to_string(kind), path));
                }
                record.ok = true;
                m_log.add(record);
                return parsed;
            }
            failure = GatewayFailure::http;
            transient = res->status == 429 || res->status >= 500;
            detail = fmt::format("HTTP {}: {}", res->status, error_message(res->body));
        }

        if (transient && attempt < ep.max_retries) {
            const double wait = std::min(m_options.backoff_max_ms, m_options.backoff_base_ms * std::pow(2.0, attempt));
            spdlog::debug("{} {} failed ({}), retry {} in {} ms", to_string(kind), path, detail, attempt + 1, wait);
            std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(wait));
            continue;
        }
        const double elapsed = seconds_since(start);
        record.retries = attempt;
        record.latency_ms = 1e3 * elapsed;
        m_log.add(record);
        throw GatewayError(failure, kind, elapsed, record.status,
                           fmt::format("{} call to {}{} failed after {:.3f} s and {} retries: {} ({})", to_string(kind),
                                       ep.base_url, path, elapsed, attempt, detail, to_string(failure)));
    }
}

std::string ModelGateway::chat(const ChatRequest& request) {
    check(!request.messages.empty(), ErrorCode::config, "chat request has no messages");
    const ServiceEndpoint& ep = m_endpoints.at(ServiceKind::chat);
    json messages = json::array();
    for (const ChatMessage& m : request.messages) {
        if (!m.image_png) {
            messages.push_back({{"role", m.role}, {"content", m.text}});
            continue;
        }
        json parts = json::array();
        parts.push_back({{"type", "text"}, {"text", m.text}});
        parts.push_back(
            {{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + base64_encode(*m.image_png)}}}});
        messages.push_back({{"role", m.role}, {"content", parts}});
    }
    const json res = call(ServiceKind::chat, "/v1/chat",
                          {{"model", request.model.empty() ? ep.model : request.model}, {"messages", messages}});
    return decode(ServiceKind::chat, [&] {
        const json& choices = need(res, "choices");
        check(choices.is_array() && !choices.empty(), ErrorCode::parse, "no choices");
        const json& content = need(need(choices.at(0), "message"), "content");
        check(content.is_string(), ErrorCode::parse, "content is not a string");
        return content.get<std::string>();
    });
}

Image ModelGateway::text_to_image(const std::string& prompt, int width, int height, std::uint64_t seed) {
    check(width >= 1 && height >= 1, ErrorCode::config, "image size must be positive");
    const json res = call(ServiceKind::t2i, "/v1/t2i",
                          {{"prompt", prompt}, {"width", width}, {"height", height}, {"seed", seed},
                           {"transport", to_string(m_wire.transport())}});
    return decode(ServiceKind::t2i, [&] {
        Image img = ImageWire::decode_image(need(res, "image"));
        check(img.width() == width && img.height() == height, ErrorCode::data,
              fmt::format("image is {}x{}, requested {}x{}", img.width(), img.height(), width, height));
        return img;
    });
}

PixelVideo ModelGateway::image_to_video(const Image& image, const std::string& prompt, int frame_count, double fps,
                                        std::uint64_t seed) {
    check(frame_count >= 1, ErrorCode::config, "frame count must be positive");
    const json res = call(ServiceKind::i2v, "/v1/i2v",
                          {{"image", m_wire.encode(image)}, {"prompt", prompt}, {"frame_count", frame_count},
                           {"fps", fps}, {"seed", seed}, {"transport", to_string(m_wire.transport())}});
    return decode(ServiceKind::i2v, [&] {
        PixelVideo v = ImageWire::decode_video(need(res, "video"));
        check(v.frames.size() == static_cast<std::size_t>(frame_count), ErrorCode::data,
              fmt::format("video has {} frames, requested {}", v.frames.size(), frame_count));
        check(v.width() == image.width() && v.height() == image.height(), ErrorCode::data,
              "video frame size differs from the input image");
        return v;
    });
}

PixelVideo ModelGateway::text_to_video(const std::string& prompt, int frame_count, int width, int height, double fps,
                                       std::uint64_t seed) {
    check(frame_count >= 1 && width >= 1 && height >= 1, ErrorCode::config, "video size must be positive");
    const json res = call(ServiceKind::t2v, "/v1/t2v",
                          {{"prompt", prompt}, {"frame_count", frame_count}, {"width", width}, {"height", height},
                           {"fps", fps}, {"seed", seed}, {"transport", to_string(m_wire.transport())}});
    return decode(ServiceKind::t2v, [&] {
        PixelVideo v = ImageWire::decode_video(need(res, "video"));
        check(v.frames.size() == static_cast<std::size_t>(frame_count), ErrorCode::data,
              fmt::format("video has {} frames, requested {}", v.frames.size(), frame_count));
        check(v.width() == width && v.height() == height, ErrorCode::data, "video frame size differs from request");
        return v;
    });
}

std::vector<std::string> ModelGateway::tag_image(const Image& image) {
    const json res = call(ServiceKind::tag, "/v1/tag", {{"image", m_wire.encode(image)}});
    return decode(ServiceKind::tag, [&] {
        const json& labels = need(res, "labels");
        check(labels.is_array(), ErrorCode::parse, "labels is not a list");
        std::vector<std::string> out;
        for (const json& l : labels) {
            check(l.is_string() && !l.get<std::string>().empty(), ErrorCode::data, "label must be a nonempty string");
            out.push_back(l.get<std::string>());
        }
        return out;
    });
}

std::vector<DetectedObject> ModelGateway::detect(const Image& image, const std::vector<std::string>& labels,
                                                 double box_threshold) {
    const json res = call(ServiceKind::detect, "/v1/detect",
                          {{"image", m_wire.encode(image)}, {"labels", labels}, {"box_threshold", box_threshold}});
    return decode(ServiceKind::detect, [&] {
        const json& objects = need(res, "objects");
        check(objects.is_array(), ErrorCode::parse, "objects is not a list");
        std::vector<DetectedObject> out;
        for (const json& o : objects) {
            DetectedObject d;
            d.label = need(o, "label").get<std::string>();
            const json& box = need(o, "box");
            check(box.is_array() && box.size() == 4, ErrorCode::data, "box must have 4 numbers");
            d.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(), box[3].get<double>()};
            d.confidence = need(o, "confidence").get<double>();
            check(!d.label.empty(), ErrorCode::data, "detected object has an empty label");
            check(d.box.valid(), ErrorCode::data, fmt::format("detected box for '{}' is invalid", d.label));
            check(d.confidence >= 0.0 && d.confidence <= 1.0, ErrorCode::data, "confidence outside [0, 1]");
            if (d.confidence >= box_threshold)
                out.push_back(d);
        }
        return out;
    });
}

Mask ModelGateway::segment(const Image& image, const BBox& box) {
    const json res = call(ServiceKind::segment, "/v1/segment",
                          {{"image", m_wire.encode(image)},
                           {"box", {box.x1, box.y1, box.x2, box.y2}},
                           {"transport", to_string(m_wire.transport())}});
    return decode(ServiceKind::segment, [&] {
        Mask m = ImageWire::decode_mask(need(res, "mask"));
        check(m.width() == image.width() && m.height() == image.height(), ErrorCode::data,
              fmt::format("mask is {}x{}, image is {}x{}", m.width(), m.height(), image.width(), image.height()));
        return m;
    });
}

LatentVideo ModelGateway::vae_encode(const PixelVideo& video) {
    video.validate();
    const json res = call(ServiceKind::vae, "/v1/vae/encode", {{"video", m_wire.encode(video)}});
    return decode(ServiceKind::vae, [&] {
        LatentVideo z = latent_from_json(need(res, "latent"));
        check(z.shape().frames == video.frames.size(), ErrorCode::data,
              fmt::format("latent has {} frames, video has {}", z.shape().frames, video.frames.size()));
        return z;
    });
}

PixelVideo ModelGateway::vae_decode(const LatentVideo& latent, double fps) {
    const json res = call(ServiceKind::vae, "/v1/vae/decode",
                          {{"latent", latent_to_json(latent)}, {"fps", fps}, {"transport", to_string(m_wire.transport())}});
    return decode(ServiceKind::vae, [&] {
        PixelVideo v = ImageWire::decode_video(need(res, "video"));
        check(v.frames.size() == latent.shape().frames, ErrorCode::data,
              fmt::format("decoded video has {} frames, latent has {}", v.frames.size(), latent.shape().frames));
        v.fps = fps;
        return v;
    });
}

LatentVideo ModelGateway::denoise(const LatentVideo& z, double t, std::string_view conditioning) {
    const json res = call(ServiceKind::denoise, "/v1/denoise",
                          {{"latent", latent_to_json(z)}, {"t", t}, {"conditioning", std::string(conditioning)}});
    return decode(ServiceKind::denoise, [&] {
        LatentVideo eps = latent_from_json(need(res, "eps"));
        check(eps.shape() == z.shape(), ErrorCode::data,
              fmt::format("noise prediction has shape {}, latent has {}", to_string(eps.shape()), to_string(z.shape())));
        return LatentVideo(z.shape(), z.codec_id(), std::vector<double>(eps.data().begin(), eps.data().end()));
    });
}

}  // namespace vsketch
