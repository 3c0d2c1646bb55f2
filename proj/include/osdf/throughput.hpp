/*
 * Copyright 2026 The OSDF Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace osdf {

using FlowId = std::uint64_t;

// Fluid model: each flow crosses a set of links and has its own rate cap
// (demand, tightened by meters).
struct FluidFlow {
    std::vector<std::size_t> links;
    double cap = 0.0;
};

struct FluidNetwork {
    std::vector<double> capacity;
    std::vector<FluidFlow> flows;
};

/// Max-min fair rates by progressive filling: raise every unfrozen flow
/// at the same pace, freezing flows at their cap or on a saturated link.
std::vector<double> max_min_rates(const FluidNetwork& net);

struct FlowRate {
    double rate = 0.0;
    double cap = 0.0;                  // min(demand, tightest meter)
    std::vector<std::size_t> links;    // indices into ThroughputReport::links
};

struct LinkUsage {
    std::string name;
    double capacity = 0.0;
    double allocated = 0.0;
};

struct ThroughputReport {
    std::map<FlowId, FlowRate> flows;
    std::vector<LinkUsage> links;

    double rate(FlowId f) const;   // 0 for unknown flows
};

/// Relative tolerance used to decide saturation and cap hits.
inline constexpr double kFluidEpsilon = 1e-9;

} // namespace osdf
