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

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace osdf {

using BitsPerSecond = std::uint64_t;

constexpr BitsPerSecond kMbps = 1'000'000;
constexpr BitsPerSecond kGbps = 1'000'000'000;

// Priority assumed when a statement has no priority clause.
constexpr int kDefaultPriority = 10;

struct PolicyId {
    std::uint64_t value = 0;

    bool assigned() const { return value != 0; }
    auto operator<=>(const PolicyId&) const = default;
};

std::string to_string(PolicyId id);

enum class NetworkOperation {
    IntraSiteRoute,
    InterSiteRoute,
    IntraSiteAlert,
    InterSiteAlert,
    IntraSiteRouteQoS,
    InterSiteRouteQoS,
};

enum class OperationKind { Route, Alert };
enum class SiteScope { Intra, Inter };

// Coarse {Route, Alert} x {Intra, Inter} class. QoS variants fall under Route.
struct OperationClass {
    OperationKind kind;
    SiteScope scope;

    bool operator==(const OperationClass&) const = default;
};

OperationClass classify(NetworkOperation op);
bool is_qos(NetworkOperation op);
std::string_view to_string(NetworkOperation op);

enum class Transport { TCP, UDP };
enum class TrafficType { RealTime, BestEffort };

std::string_view to_string(Transport t);

struct TrafficProfile {
    std::string application;   // upper-case canonical name
    Transport transport = Transport::TCP;
    TrafficType traffic_type = TrafficType::BestEffort;

    bool operator==(const TrafficProfile&) const = default;
};

struct ApplicationEntry {
    Transport transport;
    std::uint16_t dst_port;
    TrafficType traffic_type;
};

/// Maps application names (case-insensitive) to a single transport/port
/// match template. Administrators may register additional applications.
class ApplicationRegistry {
public:
    ApplicationRegistry() = default;

    /// WEB -> TCP/80, VIDEO -> TCP/5001, VOICE -> UDP/5060.
    static const ApplicationRegistry& builtin();

    /// Throws SemanticError if the name is already registered or empty.
    void register_application(std::string_view name, ApplicationEntry entry);

    const ApplicationEntry* find(std::string_view name) const;
    TrafficProfile profile(std::string_view name) const;   // throws UnknownApplication

    const std::map<std::string, ApplicationEntry>& entries() const { return entries_; }

private:
    std::map<std::string, ApplicationEntry> entries_;
};

std::string to_upper(std::string_view s);

// Unordered host pair, stored with first <= second.
struct HostPair {
    std::string first;
    std::string second;

    HostPair() = default;
    HostPair(std::string a, std::string b);

    auto operator<=>(const HostPair&) const = default;
};

/// Set of host pairs, or the AllHosts wildcard which covers every pair.
/// Set operations follow the coverage relation; the only result that cannot
/// be represented is AllHosts minus a finite set.
class PairSet {
public:
    PairSet() = default;   // empty finite set
    explicit PairSet(std::set<HostPair> pairs);
    PairSet(std::initializer_list<HostPair> pairs);

    static PairSet all_hosts();

    bool is_all() const { return all_; }
    bool empty() const { return !all_ && pairs_.empty(); }
    const std::set<HostPair>& pairs() const { return pairs_; }

    bool covers(const HostPair& p) const;
    bool subset_of(const PairSet& other) const;
    bool intersects(const PairSet& other) const;

    PairSet intersection(const PairSet& other) const;
    PairSet union_with(const PairSet& other) const;
    // nullopt when this is AllHosts and other is finite.
    std::optional<PairSet> minus(const PairSet& other) const;

    bool operator==(const PairSet&) const = default;

private:
    bool all_ = false;
    std::set<HostPair> pairs_;
};

struct Waypoint {
    std::string device;
    std::optional<std::uint32_t> egress_port;

    bool operator==(const Waypoint&) const = default;
};

struct AddressSpaceCondition {
    PairSet hosts = PairSet::all_hosts();
    std::vector<Waypoint> waypoints;

    bool operator==(const AddressSpaceCondition&) const = default;
};

enum class TrafficConditionKind { RateLimitPerFlow };

struct TrafficCondition {
    TrafficConditionKind kind = TrafficConditionKind::RateLimitPerFlow;
    BitsPerSecond rate = 0;

    bool operator==(const TrafficCondition&) const = default;
};

struct Policy {
    PolicyId id;
    NetworkOperation operation = NetworkOperation::IntraSiteRoute;
    TrafficProfile profile;
    int priority = kDefaultPriority;
    std::string source_region;
    std::string destination_region;
    AddressSpaceCondition address_space;
    std::vector<TrafficCondition> traffic_conditions;

    OperationClass op_class() const { return classify(operation); }
    std::optional<BitsPerSecond> rate_limit() const;

    bool operator==(const Policy&) const = default;
};

/// Checks every invariant that does not need the network configuration.
/// Throws SemanticError.
void validate(const Policy& p);

/// Parses one policy statement. The returned policy has no id assigned.
Policy parse_policy(std::string_view text,
                    const ApplicationRegistry& registry = ApplicationRegistry::builtin());

/// Canonical statement text; parse_policy(render_policy(p)) == p with id cleared.
std::string render_policy(const Policy& p);

std::string render_pairs(const PairSet& pairs);

} // namespace osdf
