// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/mock_server.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "vsketch/compositor.hpp"
#include "vsketch/denoiser.hpp"
#include "vsketch/error.hpp"
#include "vsketch/planner.hpp"
#include "vsketch/rng.hpp"
#include "vsketch/wire.hpp"

namespace vsketch {
namespace {

using nlohmann::json;

float channel(std::uint64_t h, int shift) {
    return 0.15f + 0.7f * static_cast<float>((h >> shift) & 0xff) / 255.0f;
}

// Text of the last user message, whether content is a string or parts.
std::string last_user_text(const json& body) {
    std::string text;
    for (const json& m : body.at("messages")) {
        if (m.value("role", "") != "user")
            continue;
        const json& c = m.at("content");
        if (c.is_string()) {
            text = c.get<std::string>();
        } else if (c.is_array()) {
            text.clear();
            for (const json& part : c)
                if (part.value("type", "") == "text")
                    text += part.value("text", "");
        }
    }
    return text;
}

std::string embedded_prompt(const std::string& text) {
    const std::string label = "(JSON string): ";
    const auto at = text.find(label);
    if (at == std::string::npos)
        return {};
    const auto start = at + label.size();
    const json j = json::parse(text.substr(start, text.find('\n', start) - start), nullptr, false);
    return j.is_string() ? j.get<std::string>() : std::string{};
}

std::string prompt_kind(const std::string& text) {
    if (text.find("Describe only the background scenery") != std::string::npos)
        return "background";
    if (text.find("You plan object layouts") != std::string::npos)
        return "plan";
    if (text.find("You pick a noise ratio") != std::string::npos)
        return "alpha";
    return "other";
}

}  // namespace

Image mock_image(const std::string& prompt, int width, int height, std::uint64_t seed) {
    check(width >= 1 && height >= 1, ErrorCode::config, "image size must be positive");
    const std::uint64_t h = derive_seed(seed, prompt);
    Image img(width, height);
    const std::string object_prefix = "An image of ";
    if (prompt.rfind(object_prefix, 0) == 0) {
        const float rgb[3] = {channel(h, 0), channel(h, 8), channel(h, 16)};
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                const double dx = (x + 0.5) / width - 0.5;
                const double dy = (y + 0.5) / height - 0.5;
                const double r2 = (dx * dx + dy * dy) / (0.3 * 0.3);
                for (int c = 0; c < 3; ++c)
                    img.at(x, y, c) = r2 <= 1.0 ? rgb[c] * static_cast<float>(0.8 + 0.2 * (1.0 - r2)) : 0.94f;
            }
        return img;
    }
    const float top[3] = {channel(h, 0), channel(h, 8), channel(h, 16)};
    const float bottom[3] = {channel(h, 24), channel(h, 32), channel(h, 40)};
    const double freq = 1.0 + static_cast<double>((h >> 48) % 4);
    const double phase = static_cast<double>((h >> 52) % 628) / 100.0;
    for (int y = 0; y < height; ++y) {
        const float w = height > 1 ? static_cast<float>(y) / static_cast<float>(height - 1) : 0.0f;
        for (int x = 0; x < width; ++x) {
            const auto ripple = static_cast<float>(0.05 * std::sin(2.0 * std::numbers::pi * freq * x / width + phase));
            for (int c = 0; c < 3; ++c)
                img.at(x, y, c) = std::clamp(top[c] * (1.0f - w) + bottom[c] * w + ripple, 0.0f, 1.0f);
        }
    }
    return img;
}

PixelVideo mock_animate(const Image& image, int frame_count, double fps, std::uint64_t seed) {
    check(frame_count >= 1, ErrorCode::config, "frame count must be positive");
    const double phase = static_cast<double>(derive_seed(seed, "animate") % 628) / 100.0;
    PixelVideo v;
    v.fps = fps;
    for (int k = 0; k < frame_count; ++k) {
        const auto gain = static_cast<float>(1.0 + 0.03 * std::sin(2.0 * std::numbers::pi * k / frame_count + phase));
        Image f = image;
        for (float& x : f.data())
            x = std::clamp(x * gain, 0.0f, 1.0f);
        v.frames.push_back(std::move(f));
    }
    return v;
}

struct MockModelServer::Impl {
    MockOptions options;
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::filesystem::path scratch;
    bool owns_scratch = false;
    GaussianDenoiser denoiser;

    mutable std::mutex mutex;
    std::map<std::string, std::deque<int>> failures;
    std::map<std::string, std::deque<std::string>> corrupt;
    std::map<std::string, std::chrono::milliseconds> delays;
    std::map<std::string, std::size_t> counts;

    explicit Impl(MockOptions opts)
        : options(std::move(opts)),
          denoiser(options.denoiser_mu, options.denoiser_sigma, options.schedule.build()) {}

    ImageWire wire_for(const json& body) const {
        if (body.value("transport", "inline") == "path")
            return ImageWire(ImageTransport::file_path, scratch);
        return ImageWire(ImageTransport::inline_png, {});
    }

    json chat(const json& body) {
        const std::string text = last_user_text(body);
        const std::string kind = prompt_kind(text);
        std::string reply;
        {
            std::lock_guard lock(mutex);
            if (const auto it = options.chat_replies.find(kind); it != options.chat_replies.end())
                reply = it->second;
        }
        if (reply.empty()) {
            const std::string prompt = embedded_prompt(text);
            if (kind == "background") {
                reply = fmt::format("An empty, evenly lit setting for the scene \"{}\", with all moving subjects "
                                    "removed. The camera does not move.",
                                    prompt);
            } else if (kind == "plan") {
                int frames = 2;
                const auto at = text.find("Number of frames: ");
                if (at != std::string::npos)
                    frames = std::max(2, std::atoi(text.c_str() + at + 18));
                const LayoutPlan plan = fallback_plan(prompt, frames, guess_object_specs(prompt));
                reply = "Here is a layout that keeps the motion smooth.\n```json\n" + serialize_plan(plan).dump(2) +
                        "\n```\nThe objects stay on the ground band.";
            } else if (kind == "alpha") {
                const bool moving = guess_object_specs(prompt).front().direction != Direction::none;
                reply = moving ? R"({"alpha": 0.75})" : R"({"alpha": 0.85})";
            } else {
                reply = "ok";
            }
        }
        return {{"id", "mock-chat"},
                {"object", "chat.completion"},
                {"model", body.value("model", "")},
                {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", reply}}}, {"finish_reason", "stop"}}}}};
    }

    json detect(const json& body) {
        const double threshold = body.value("box_threshold", 0.35);
        std::set<std::string> seen;
        json objects = json::array();
        for (const json& l : body.at("labels")) {
            const std::string label = l.get<std::string>();
            if (!seen.insert(label).second)
                continue;
            bool known = false;
            for (const DetectedObject& d : options.detect_fixtures) {
                if (d.label != label)
                    continue;
                known = true;
                if (d.confidence >= threshold)
                    objects.push_back({{"label", d.label}, {"box", {d.box.x1, d.box.y1, d.box.x2, d.box.y2}},
                                       {"confidence", d.confidence}});
            }
            if (!known && options.unknown_label_confidence >= threshold)
                objects.push_back({{"label", label}, {"box", {0.35, 0.35, 0.65, 0.65}},
                                   {"confidence", options.unknown_label_confidence}});
        }
        return {{"objects", objects}};
    }

    json handle(const std::string& path, const json& body) {
        if (path == "/v1/chat")
            return chat(body);
        if (path == "/v1/t2i") {
            const Image img = mock_image(body.at("prompt").get<std::string>(), body.at("width").get<int>(),
                                         body.at("height").get<int>(), body.value("seed", std::uint64_t{0}));
            return {{"image", wire_for(body).encode(img)}};
        }
        if (path == "/v1/i2v") {
            const Image img = ImageWire::decode_image(body.at("image"));
            return {{"video", wire_for(body).encode(mock_animate(img, body.at("frame_count").get<int>(),
                                                                 body.value("fps", 8.0),
                                                                 body.value("seed", std::uint64_t{0})))}};
        }
        if (path == "/v1/t2v") {
            const std::uint64_t seed = body.value("seed", std::uint64_t{0});
            const Image img = mock_image(body.at("prompt").get<std::string>(), body.at("width").get<int>(),
                                         body.at("height").get<int>(), seed);
            return {{"video", wire_for(body).encode(
                                  mock_animate(img, body.at("frame_count").get<int>(), body.value("fps", 8.0), seed))}};
        }
        if (path == "/v1/tag") {
            ImageWire::decode_image(body.at("image"));
            return {{"labels", options.tags}};
        }
        if (path == "/v1/detect") {
            ImageWire::decode_image(body.at("image"));
            return detect(body);
        }
        if (path == "/v1/segment") {
            const Image img = ImageWire::decode_image(body.at("image"));
            const json& b = body.at("box");
            const PixelRect r = box_to_pixels({b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                                               b[3].get<double>()},
                                              img.width(), img.height());
            // The ellipse inscribed in the box, like the mock object shape.
            const double cx = 0.5 * (b[0].get<double>() + b[2].get<double>());
            const double cy = 0.5 * (b[1].get<double>() + b[3].get<double>());
            const double rx = 0.5 * (b[2].get<double>() - b[0].get<double>());
            const double ry = 0.5 * (b[3].get<double>() - b[1].get<double>());
            Mask m(img.width(), img.height());
            for (int y = r.y0; y < r.y1; ++y)
                for (int x = r.x0; x < r.x1; ++x) {
                    const double dx = ((x + 0.5) / img.width() - cx) / rx;
                    const double dy = ((y + 0.5) / img.height() - cy) / ry;
                    m.at(x, y) = dx * dx + dy * dy <= 1.0 ? 1.0f : 0.0f;
                }
            return {{"mask", wire_for(body).encode(m)}};
        }
        if (path == "/v1/vae/encode") {
            const PixelVideo v = ImageWire::decode_video(body.at("video"));
            LatentVideo z({v.frames.size(), 3, static_cast<std::size_t>(v.height()),
                           static_cast<std::size_t>(v.width())},
                          "remote");
            for (std::size_t f = 0; f < v.frames.size(); ++f)
                for (int y = 0; y < v.height(); ++y)
                    for (int x = 0; x < v.width(); ++x)
                        for (int c = 0; c < 3; ++c)
                            z.at(f, static_cast<std::size_t>(c), static_cast<std::size_t>(y), static_cast<std::size_t>(x)) =
                                2.0 * v.frames[f].at(x, y, c) - 1.0;
            return {{"latent", latent_to_json(z)}};
        }
        if (path == "/v1/vae/decode") {
            const LatentVideo z = latent_from_json(body.at("latent"));
            const LatentShape& s = z.shape();
            check(s.channels == 3, ErrorCode::data, "mock VAE expects 3 latent channels");
            PixelVideo v;
            v.fps = body.value("fps", 8.0);
            for (std::size_t f = 0; f < s.frames; ++f) {
                Image img(static_cast<int>(s.width), static_cast<int>(s.height));
                for (std::size_t y = 0; y < s.height; ++y)
                    for (std::size_t x = 0; x < s.width; ++x)
                        for (std::size_t c = 0; c < 3; ++c)
                            img.at(static_cast<int>(x), static_cast<int>(y), static_cast<int>(c)) =
                                static_cast<float>(std::clamp((z.at(f, c, y, x) + 1.0) / 2.0, 0.0, 1.0));
                v.frames.push_back(std::move(img));
            }
            return {{"video", wire_for(body).encode(v)}};
        }
        if (path == "/v1/denoise") {
            const LatentVideo z = latent_from_json(body.at("latent"));
            const LatentVideo eps = denoiser.predict_noise(z, body.at("t").get<double>(), body.value("conditioning", ""));
            return {{"eps", latent_to_json(eps)}};
        }
        fail(ErrorCode::config, "unknown path " + path);
    }

    void route(const httplib::Request& req, httplib::Response& res) {
        std::chrono::milliseconds delay{0};
        std::optional<int> status;
        std::optional<std::string> raw;
        {
            std::lock_guard lock(mutex);
            ++counts[req.path];
            if (auto it = delays.find(req.path); it != delays.end())
                delay = it->second;
            if (auto it = failures.find(req.path); it != failures.end() && !it->second.empty()) {
                status = it->second.front();
                it->second.pop_front();
            } else if (auto c = corrupt.find(req.path); c != corrupt.end() && !c->second.empty()) {
                raw = c->second.front();
                c->second.pop_front();
            }
        }
        if (delay.count() > 0)
            std::this_thread::sleep_for(delay);
        if (status) {
            res.status = *status;
            res.set_content(json{{"error", {{"message", "injected failure"}, {"type", "injected"}}}}.dump(),
                            "application/json");
            return;
        }
        if (raw) {
            res.status = 200;
            res.set_content(*raw, "application/json");
            return;
        }
        try {
            const json body = json::parse(req.body);
            res.set_content(handle(req.path, body).dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(json{{"error", {{"message", e.what()}, {"type", "bad_request"}}}}.dump(),
                            "application/json");
        }
    }
};

MockModelServer::MockModelServer(MockOptions options) : m_impl(std::make_unique<Impl>(std::move(options))) {
    Impl& impl = *m_impl;
    if (impl.options.scratch_dir.empty()) {
        impl.scratch = std::filesystem::temp_directory_path() /
                       fmt::format("vsketch_mock_{}_{}", static_cast<const void*>(this),
                                   std::chrono::steady_clock::now().time_since_epoch().count());
        impl.owns_scratch = true;
    } else {
        impl.scratch = impl.options.scratch_dir;
    }
    impl.server.Post(R"(/v1/.*)", [&impl](const httplib::Request& req, httplib::Response& res) { impl.route(req, res); });
    impl.port = impl.server.bind_to_any_port("127.0.0.1");
    check(impl.port > 0, ErrorCode::io, "mock server could not bind a port");
    impl.thread = std::thread([&impl] { impl.server.listen_after_bind(); });
    impl.server.wait_until_ready();
}

MockModelServer::~MockModelServer() {
    stop();
    if (m_impl->owns_scratch) {
        std::error_code ec;
        std::filesystem::remove_all(m_impl->scratch, ec);
    }
}

void MockModelServer::stop() {
    if (m_impl->thread.joinable()) {
        m_impl->server.stop();
        m_impl->thread.join();
    }
}

std::string MockModelServer::base_url() const {
    return fmt::format("http://127.0.0.1:{}", m_impl->port);
}

int MockModelServer::port() const {
    return m_impl->port;
}

void MockModelServer::fail_next(const std::string& path, std::vector<int> statuses) {
    std::lock_guard lock(m_impl->mutex);
    auto& q = m_impl->failures[path];
    q.insert(q.end(), statuses.begin(), statuses.end());
}

void MockModelServer::corrupt_next(const std::string& path, std::string body) {
    std::lock_guard lock(m_impl->mutex);
    m_impl->corrupt[path].push_back(std::move(body));
}

void MockModelServer::set_delay(const std::string& path, std::chrono::milliseconds delay) {
    std::lock_guard lock(m_impl->mutex);
    m_impl->delays[path] = delay;
}

void MockModelServer::set_chat_reply(const std::string& kind, std::string text) {
    std::lock_guard lock(m_impl->mutex);
    m_impl->options.chat_replies[kind] = std::move(text);
}

std::size_t MockModelServer::request_count(const std::string& path) const {
    std::lock_guard lock(m_impl->mutex);
    const auto it = m_impl->counts.find(path);
    return it == m_impl->counts.end() ? 0 : it->second;
}

}  // namespace vsketch
