// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vsketch {

struct ChatMessage {
    std::string role;
    std::string text;
    /// PNG bytes of an attached image, if any.
    std::optional<std::vector<std::uint8_t>> image_png;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    std::string model;
};

class ChatClient {
public:
    virtual ~ChatClient() = default;
    /// Returns the assistant text verbatim.
    virtual std::string chat(const ChatRequest& request) = 0;
};

inline ChatRequest user_prompt(std::string text, std::string model = {}) {
    return ChatRequest{{ChatMessage{"user", std::move(text), std::nullopt}}, std::move(model)};
}

}  // namespace vsketch
