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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "osdf/network.hpp"
#include "osdf/policy.hpp"

namespace osdf {

struct MatchFields {
    std::string src_host;
    std::string dst_host;
    std::string src_address;
    std::string dst_address;
    Transport transport = Transport::TCP;
    std::uint16_t dst_port = 0;
    std::optional<std::uint16_t> src_port;   // unset = wildcard
    std::optional<std::uint32_t> in_port;    // unset = wildcard

    // True if a packet carrying `packet`'s header fields hits this match.
    bool matches(const MatchFields& packet) const;

    bool operator==(const MatchFields&) const = default;
};

struct ForwardToPort {
    std::uint32_t port = 0;
    bool operator==(const ForwardToPort&) const = default;
};
struct Drop {
    bool operator==(const Drop&) const = default;
};
struct LogAndDrop {
    bool operator==(const LogAndDrop&) const = default;
};

using RuleAction = std::variant<ForwardToPort, Drop, LogAndDrop>;

// Meter band action is always drop.
struct MeterSpec {
    BitsPerSecond rate = 0;
    bool operator==(const MeterSpec&) const = default;
};

struct FlowRule {
    std::string switch_id;
    MatchFields match;
    RuleAction action;
    int priority = kDefaultPriority;
    std::optional<MeterSpec> meter;
    PolicyId policy;   // provenance, not matched on

    bool operator==(const FlowRule&) const = default;
};

struct Hop {
    std::string switch_id;
    std::uint32_t in_port = 0;
    std::uint32_t out_port = 0;

    bool operator==(const Hop&) const = default;
};

struct Path {
    std::string src_host;
    std::string dst_host;
    std::vector<Hop> hops;

    std::vector<std::string> switch_ids() const;
    bool operator==(const Path&) const = default;
};

// Endpoints of one concrete flow; src_port distinguishes parallel connections.
struct FlowEndpoints {
    std::string src_host;
    std::string dst_host;
    std::optional<std::uint16_t> src_port;
};

/// Match template for an application between two hosts. Throws
/// UnknownApplication or NotFound (host).
MatchFields build_selector(const ApplicationRegistry& registry, std::string_view application,
                           std::string_view src_host, std::string_view dst_host,
                           const Topology& topology);

/// Minimum-hop path visiting the waypoints in order (leaving a waypoint
/// through its port when one is given); ties go to the lexicographically
/// smallest switch sequence. Throws NoPath.
Path select_path(const Topology& topology, std::string_view src_host, std::string_view dst_host,
                 std::span<const Waypoint> waypoints = {});

/// True if the flow lies in the policy's span and address space.
bool covers_flow(const Policy& policy, std::string_view src_host, std::string_view dst_host,
                 const NetworkConfig& config);

/// Forward-direction rules for one flow under `policy`: a forwarding rule
/// per path switch for routes (metered for QoS), a single LogAndDrop at the
/// ingress switch for alerts. Throws PolicyNotApplicable, NoPath.
std::vector<FlowRule> compile(const Policy& policy, const FlowEndpoints& flow,
                              const NetworkConfig& config,
                              const ApplicationRegistry& registry = ApplicationRegistry::builtin());

/// Same as compile() but also returns the path the route rules follow
/// (empty hops for alerts).
std::vector<FlowRule> compile(const Policy& policy, const FlowEndpoints& flow,
                              const NetworkConfig& config, const ApplicationRegistry& registry,
                              Path* path_out);

/// Return-direction counterpart of a forwarding rule at `hop`: mirrored
/// match, forwarding out of the hop's ingress port. The forward rule must
/// carry a source port (std::invalid_argument otherwise).
FlowRule reverse_rule(const FlowRule& forward, const Hop& hop);

/// "<switch> pri=<p> match=<proto>/<dport> <src>-><dst> action=<...> [meter=<rate>]"
std::string render_rule(const FlowRule& rule);
std::string render_action(const RuleAction& a);
std::string render_rate(BitsPerSecond rate);

} // namespace osdf
