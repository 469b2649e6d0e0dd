// Copyright (C) 2026 The vsketch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsketch/layout.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace vsketch {

bool BBox::valid() const {
    const auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    return in_unit(x1) && in_unit(y1) && in_unit(x2) && in_unit(y2) && x1 < x2 && y1 < y2;
}

const Placement* FramePlan::find(const std::string& name) const {
    for (const Placement& p : placements)
        if (p.name == name)
            return &p;
    return nullptr;
}

std::string base_object_name(const std::string& name) {
    const auto hash = name.rfind('#');
    if (hash == std::string::npos || hash == 0 || hash + 1 == name.size())
        return name;
    const bool digits = std::all_of(name.begin() + static_cast<std::ptrdiff_t>(hash) + 1, name.end(),
                                    [](unsigned char c) { return std::isdigit(c) != 0; });
    return digits ? name.substr(0, hash) : name;
}

void refresh_objects(LayoutPlan& plan) {
    plan.objects.clear();
    for (const FramePlan& frame : plan.frames)
        for (const Placement& p : frame.placements)
            if (std::find(plan.objects.begin(), plan.objects.end(), p.name) == plan.objects.end())
                plan.objects.push_back(p.name);
}

}  // namespace vsketch
