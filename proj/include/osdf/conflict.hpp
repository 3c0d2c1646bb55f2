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
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "osdf/policy.hpp"

namespace osdf {

class NetworkConfig;
class PolicyStore;

enum class ConflictClass {
    NoConflict,
    Redundancy,
    Shadowing,
    Generalization,
    Correlation,
    Overlap,
};

std::string_view to_string(ConflictClass c);

struct RemovePolicy {
    PolicyId id;
    // Set when the exact fix (AllHosts minus a finite set) is not
    // representable and removal was recommended instead.
    bool lossy = false;

    bool operator==(const RemovePolicy&) const = default;
};

struct UpdateAddressSpace {
    PolicyId id;
    AddressSpaceCondition address_space;

    bool operator==(const UpdateAddressSpace&) const = default;
};

struct ReplaceBoth {
    PolicyId first;
    PolicyId second;
    Policy merged;   // id unassigned

    bool operator==(const ReplaceBoth&) const = default;
};

using ResolutionAction = std::variant<RemovePolicy, UpdateAddressSpace, ReplaceBoth>;

bool is_lossy(const ResolutionAction& a);

struct ConflictReport {
    PolicyId first;
    PolicyId second;
    ConflictClass cls = ConflictClass::NoConflict;
    ResolutionAction resolution;

    bool operator==(const ConflictReport&) const = default;
};

/// Table-driven pair classification. Rows are tried in the order
/// Redundancy, Shadowing, Generalization, Correlation, Overlap; the first
/// hit wins. Pairs with different profile or regions never conflict.
ConflictClass classify_pair(const Policy& pi, const Policy& pj);

/// Resolution for a classified pair. Throws InvalidClass for NoConflict.
ResolutionAction recommend(const Policy& pi, const Policy& pj, ConflictClass cls);

/// Applies a resolution to a policy list (ids preserved; a merged policy
/// gets max id + 1). Throws NotFound if a referenced id is missing.
std::vector<Policy> apply_resolution(std::vector<Policy> policies, const ResolutionAction& action);

struct DetectionResult {
    std::vector<ConflictReport> reports;   // sorted by (first, second)
    std::uint64_t pairs_evaluated = 0;     // always n * (n - 1)
};

/// All ordered pairs, one report per conflicting pair; a symmetric Overlap
/// is reported once with the lower id first. Policies must be sorted by id.
/// Runs the pair loop in parallel when built with OpenMP.
DetectionResult detect_all(std::span<const Policy> policies);

/// Single-threaded reference for detect_all; identical output.
DetectionResult detect_all_serial(std::span<const Policy> policies);

/// Store overloads. With a config, every host named by a policy must exist
/// (UnresolvableHost otherwise) before any pair is classified.
DetectionResult detect_all(const PolicyStore& store, const NetworkConfig* config = nullptr);

void check_resolvable(std::span<const Policy> policies, const NetworkConfig& config);

/// "<class> P<i> vs P<j>: <resolution text>"
std::string render_report(const ConflictReport& r);
std::string render_resolution(const ResolutionAction& a);

} // namespace osdf
