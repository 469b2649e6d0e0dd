// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vsketch {

/// Axis-aligned box in normalized frame coordinates.
struct BBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 1.0;
    double y2 = 1.0;

    double center_x() const { return 0.5 * (x1 + x2); }
    double center_y() const { return 0.5 * (y1 + y2); }
    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }

    /// x1 < x2, y1 < y2 and everything inside [0, 1].
    bool valid() const;

    bool operator==(const BBox&) const = default;
};

struct DetectedObject {
    std::string label;
    BBox box;
    double confidence = 1.0;

    bool operator==(const DetectedObject&) const = default;
};

struct Placement {
    std::string name;
    BBox box;

    bool operator==(const Placement&) const = default;
};

struct FramePlan {
    int index = 0;
    std::string caption;
    std::vector<Placement> placements;

    const Placement* find(const std::string& name) const;

    bool operator==(const FramePlan&) const = default;
};

struct LayoutPlan {
    std::vector<FramePlan> frames;
    std::string reasoning;
    std::vector<std::string> objects;
    std::optional<double> alpha;

    bool operator==(const LayoutPlan&) const = default;
};

/// Object name without a trailing "#k" instance suffix ("egg#2" -> "egg").
std::string base_object_name(const std::string& name);

/// Rebuilds plan.objects as the first-seen order of placement names.
void refresh_objects(LayoutPlan& plan);

}  // namespace vsketch
