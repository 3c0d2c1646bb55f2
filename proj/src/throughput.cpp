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

#include "osdf/throughput.hpp"

#include <algorithm>
#include <limits>

namespace osdf {

double ThroughputReport::rate(FlowId f) const
{
    auto it = flows.find(f);
    return it == flows.end() ? 0.0 : it->second.rate;
}

std::vector<double> max_min_rates(const FluidNetwork& net)
{
    const std::size_t nflows = net.flows.size();
    const std::size_t nlinks = net.capacity.size();
    std::vector<double> rate(nflows, 0.0);
    std::vector<bool> frozen(nflows, false);

    std::size_t active = 0;
    for (std::size_t f = 0; f < nflows; ++f) {
        if (net.flows[f].cap <= 0.0)
            frozen[f] = true;
        else
            ++active;
    }

    std::vector<double> used(nlinks);
    std::vector<std::size_t> crossing(nlinks);
    while (active > 0) {
        std::fill(used.begin(), used.end(), 0.0);
        std::fill(crossing.begin(), crossing.end(), 0);
        for (std::size_t f = 0; f < nflows; ++f) {
            for (std::size_t l : net.flows[f].links) {
                used[l] += rate[f];
                if (!frozen[f])
                    ++crossing[l];
            }
        }

        double step = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < nlinks; ++l) {
            if (crossing[l] > 0)
                step = std::min(step, (net.capacity[l] - used[l]) / static_cast<double>(crossing[l]));
        }
        for (std::size_t f = 0; f < nflows; ++f) {
            if (!frozen[f])
                step = std::min(step, net.flows[f].cap - rate[f]);
        }
        step = std::max(step, 0.0);

        for (std::size_t f = 0; f < nflows; ++f) {
            if (frozen[f])
                continue;
            rate[f] += step;
            for (std::size_t l : net.flows[f].links)
                used[l] += step;
        }

        std::vector<bool> saturated(nlinks, false);
        for (std::size_t l = 0; l < nlinks; ++l)
            saturated[l] = net.capacity[l] - used[l] <= kFluidEpsilon * net.capacity[l];

        for (std::size_t f = 0; f < nflows; ++f) {
            if (frozen[f])
                continue;
            const FluidFlow& flow = net.flows[f];
            if (flow.cap - rate[f] <= kFluidEpsilon * flow.cap) {
                rate[f] = flow.cap;
                frozen[f] = true;
            } else if (std::any_of(flow.links.begin(), flow.links.end(),
                                   [&](std::size_t l) { return saturated[l]; })) {
                frozen[f] = true;
            }
            if (frozen[f])
                --active;
        }
    }
    return rate;
}

} // namespace osdf
