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

#include "osdf/conflict.hpp"

#include <algorithm>
#include <iterator>
#include <tuple>
#include <type_traits>

#include "osdf/error.hpp"
#include "osdf/network.hpp"
#include "osdf/policy_store.hpp"

namespace osdf {

std::string_view to_string(ConflictClass c)
{
    switch (c) {
    case ConflictClass::NoConflict:     return "NoConflict";
    case ConflictClass::Redundancy:     return "Redundancy";
    case ConflictClass::Shadowing:      return "Shadowing";
    case ConflictClass::Generalization: return "Generalization";
    case ConflictClass::Correlation:    return "Correlation";
    case ConflictClass::Overlap:        return "Overlap";
    }
    return "?";
}

bool is_lossy(const ResolutionAction& a)
{
    const auto* rm = std::get_if<RemovePolicy>(&a);
    return rm != nullptr && rm->lossy;
}

ConflictClass classify_pair(const Policy& pi, const Policy& pj)
{
    if (pi.profile.application != pj.profile.application ||
        pi.source_region != pj.source_region ||
        pi.destination_region != pj.destination_region)
        return ConflictClass::NoConflict;

    const PairSet& sci = pi.address_space.hosts;
    const PairSet& scj = pj.address_space.hosts;
    const bool same_op = pi.operation == pj.operation;
    const bool subset = sci.subset_of(scj);
    const bool superset = scj.subset_of(sci);
    // Correlation and Overlap need a proper partial overlap.
    const bool partial = !subset && !superset && sci.intersects(scj);

    if (same_op && subset && pi.priority <= pj.priority)
        return ConflictClass::Redundancy;
    if (!same_op && subset && pi.priority < pj.priority)
        return ConflictClass::Shadowing;
    if (!same_op && superset && pi.priority < pj.priority)
        return ConflictClass::Generalization;
    if (!same_op && partial && pi.priority <= pj.priority)
        return ConflictClass::Correlation;
    if (same_op && partial)
        return ConflictClass::Overlap;
    return ConflictClass::NoConflict;
}

ResolutionAction recommend(const Policy& pi, const Policy& pj, ConflictClass cls)
{
    switch (cls) {
    case ConflictClass::Redundancy:
    case ConflictClass::Shadowing:
        return RemovePolicy{pi.id, false};

    case ConflictClass::Generalization: {
        auto narrowed = pi.address_space.hosts.minus(pj.address_space.hosts);
        if (!narrowed)
            return RemovePolicy{pi.id, true};
        AddressSpaceCondition asc = pi.address_space;
        asc.hosts = std::move(*narrowed);
        return UpdateAddressSpace{pi.id, std::move(asc)};
    }

    case ConflictClass::Correlation: {
        // pi.priority <= pj.priority, so pi is the lower (or equal) one.
        const PairSet common = pi.address_space.hosts.intersection(pj.address_space.hosts);
        AddressSpaceCondition asc = pi.address_space;
        asc.hosts = *pi.address_space.hosts.minus(common);
        return UpdateAddressSpace{pi.id, std::move(asc)};
    }

    case ConflictClass::Overlap: {
        // The merged policy inherits everything but the address space from
        // the higher-priority side (pi on ties).
        const Policy& lead = pj.priority > pi.priority ? pj : pi;
        Policy merged = lead;
        merged.id = PolicyId{};
        merged.address_space.hosts = pi.address_space.hosts.union_with(pj.address_space.hosts);
        return ReplaceBoth{pi.id, pj.id, std::move(merged)};
    }

    case ConflictClass::NoConflict:
        break;
    }
    throw InvalidClass("no resolution exists for NoConflict");
}

std::vector<Policy> apply_resolution(std::vector<Policy> policies, const ResolutionAction& action)
{
    auto find = [&](PolicyId id) {
        auto it = std::find_if(policies.begin(), policies.end(),
                               [&](const Policy& p) { return p.id == id; });
        if (it == policies.end())
            throw NotFound("resolution references missing policy " + to_string(id));
        return it;
    };

    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, RemovePolicy>) {
                policies.erase(find(a.id));
            } else if constexpr (std::is_same_v<T, UpdateAddressSpace>) {
                find(a.id)->address_space = a.address_space;
            } else {
                std::uint64_t next = 0;
                for (const auto& p : policies)
                    next = std::max(next, p.id.value);
                policies.erase(find(a.first));
                policies.erase(find(a.second));
                Policy merged = a.merged;
                merged.id = PolicyId{next + 1};
                policies.push_back(std::move(merged));
            }
        },
        action);
    return policies;
}

namespace {

// Reports for row i: pi against every other policy. Returns the number of
// pairs classified.
std::uint64_t classify_row(std::span<const Policy> policies, std::size_t i,
                           std::vector<ConflictReport>& out)
{
    std::uint64_t evaluated = 0;
    const Policy& pi = policies[i];
    for (std::size_t j = 0; j < policies.size(); ++j) {
        if (i == j)
            continue;
        const Policy& pj = policies[j];
        const ConflictClass cls = classify_pair(pi, pj);
        ++evaluated;
        if (cls == ConflictClass::NoConflict)
            continue;
        if (cls == ConflictClass::Overlap && pj.id < pi.id)
            continue;
        out.push_back({pi.id, pj.id, cls, recommend(pi, pj, cls)});
    }
    return evaluated;
}

void sort_reports(std::vector<ConflictReport>& reports)
{
    std::stable_sort(reports.begin(), reports.end(),
                     [](const ConflictReport& a, const ConflictReport& b) {
                         return std::tie(a.first, a.second) < std::tie(b.first, b.second);
                     });
}

} // namespace

DetectionResult detect_all_serial(std::span<const Policy> policies)
{
    DetectionResult result;
    for (std::size_t i = 0; i < policies.size(); ++i)
        result.pairs_evaluated += classify_row(policies, i, result.reports);
    sort_reports(result.reports);
    return result;
}

DetectionResult detect_all(std::span<const Policy> policies)
{
    const auto n = static_cast<std::int64_t>(policies.size());
    std::vector<std::vector<ConflictReport>> rows(policies.size());
    std::uint64_t evaluated = 0;

    // Rows are independent; each thread fills its own slots and the merge
    // below restores the canonical order.
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : evaluated)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto row = static_cast<std::size_t>(i);
        evaluated += classify_row(policies, row, rows[row]);
    }

    DetectionResult result;
    std::size_t total = 0;
    for (const auto& r : rows)
        total += r.size();
    result.reports.reserve(total);
    for (auto& r : rows)
        std::move(r.begin(), r.end(), std::back_inserter(result.reports));
    result.pairs_evaluated = evaluated;
    sort_reports(result.reports);
    return result;
}

void check_resolvable(std::span<const Policy> policies, const NetworkConfig& config)
{
    const Topology& topo = config.topology();
    for (const auto& p : policies) {
        for (const auto& hp : p.address_space.hosts.pairs()) {
            for (const std::string* name : {&hp.first, &hp.second}) {
                if (topo.find_host(*name) == nullptr)
                    throw UnresolvableHost(p.id.value, *name);
            }
        }
    }
}

DetectionResult detect_all(const PolicyStore& store, const NetworkConfig* config)
{
    const std::vector<Policy> policies = store.list();
    if (config != nullptr)
        check_resolvable(policies, *config);
    return detect_all(std::span<const Policy>(policies));
}

std::string render_resolution(const ResolutionAction& a)
{
    return std::visit(
        [](const auto& r) -> std::string {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, RemovePolicy>) {
                std::string s = "remove " + to_string(r.id);
                if (r.lossy)
                    s += " (lossy: all-hosts address space cannot exclude specific pairs)";
                return s;
            } else if constexpr (std::is_same_v<T, UpdateAddressSpace>) {
                return "update " + to_string(r.id) + " address space to between " +
                       render_pairs(r.address_space.hosts);
            } else {
                return "replace " + to_string(r.first) + " and " + to_string(r.second) +
                       " with \"" + render_policy(r.merged) + "\"";
            }
        },
        a);
}

std::string render_report(const ConflictReport& r)
{
    return std::string(to_string(r.cls)) + " " + to_string(r.first) + " vs " +
           to_string(r.second) + ": " + render_resolution(r.resolution);
}

} // namespace osdf
