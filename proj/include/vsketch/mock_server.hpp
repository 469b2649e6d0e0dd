// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vsketch/image.hpp"
#include "vsketch/layout.hpp"
#include "vsketch/schedule.hpp"

namespace vsketch {

struct MockOptions {
    std::vector<std::string> tags{"path", "tree", "sky"};
    std::vector<DetectedObject> detect_fixtures{{"path", {0.44, 0.57, 0.99, 0.99}, 0.92},
                                                {"tree", {0.05, 0.1, 0.3, 0.6}, 0.81}};
    /// Confidence reported for labels without a fixture. Below the default
    /// box threshold, so such labels are normally dropped.
    double unknown_label_confidence = 0.3;
    /// Overrides for chat replies keyed by prompt kind: background, plan,
    /// alpha or other.
    std::map<std::string, std::string> chat_replies;
    double denoiser_mu = 0.0;
    double denoiser_sigma = 0.5;
    SchedulePreset schedule;
    /// Where responses requested with path transport are written. A fresh
    /// temporary directory when empty.
    std::filesystem::path scratch_dir;
};

/// Procedural image for a t2i request. Prompts starting with "An image of "
/// give a single centered object on a light backdrop.
Image mock_image(const std::string& prompt, int width, int height, std::uint64_t seed);

/// Static-camera animation of an image: per-frame brightness drift only.
PixelVideo mock_animate(const Image& image, int frame_count, double fps, std::uint64_t seed);

/// In-process HTTP server implementing every gateway endpoint with
/// deterministic fakes. Listens on 127.0.0.1 at an ephemeral port.
class MockModelServer {
public:
    explicit MockModelServer(MockOptions options = {});
    ~MockModelServer();
    MockModelServer(const MockModelServer&) = delete;
    MockModelServer& operator=(const MockModelServer&) = delete;

    std::string base_url() const;
    int port() const;

    /// The next requests to path answer with these HTTP statuses, in order.
    void fail_next(const std::string& path, std::vector<int> statuses);
    /// The next request to path answers 200 with this raw body.
    void corrupt_next(const std::string& path, std::string body);
    void set_delay(const std::string& path, std::chrono::milliseconds delay);
    void set_chat_reply(const std::string& kind, std::string text);

    std::size_t request_count(const std::string& path) const;

    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> m_impl;
};

}  // namespace vsketch
