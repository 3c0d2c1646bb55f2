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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "osdf/policy.hpp"

namespace osdf {

struct PortRef {
    std::string device;
    std::uint32_t port = 0;

    auto operator<=>(const PortRef&) const = default;
};

/// Parses "S1:2". Throws FormatError.
PortRef parse_port_ref(std::string_view text);
std::string to_string(const PortRef& p);

struct Link {
    PortRef a;
    PortRef b;
    BitsPerSecond capacity = 0;
};

struct Host {
    std::string name;
    PortRef attach;
    std::string address;
};

// One usable port on a switch and what sits behind it.
struct Adjacency {
    std::uint32_t port = 0;
    std::string neighbor;              // switch id, empty for host ports
    std::uint32_t neighbor_port = 0;
    std::size_t link = 0;              // index into Topology::links()
};

class Topology {
public:
    const std::set<std::string>& switches() const { return switches_; }
    const std::vector<Link>& links() const { return links_; }
    const std::map<std::string, Host>& hosts() const { return hosts_; }

    bool has_switch(std::string_view id) const;
    bool has_port(std::string_view sw, std::uint32_t port) const;
    std::set<std::uint32_t> ports(std::string_view sw) const;

    const Host& host(std::string_view name) const;   // throws NotFound
    const Host* find_host(std::string_view name) const;

    // Inter-switch adjacencies of sw, ordered by local port.
    const std::vector<Adjacency>& neighbors(std::string_view sw) const;

    // Link index reached through sw:port, if that port carries a link.
    std::optional<std::size_t> link_at(std::string_view sw, std::uint32_t port) const;
    // Host attached at sw:port, if any.
    const Host* host_at(std::string_view sw, std::uint32_t port) const;

private:
    friend class NetworkConfigBuilder;

    std::set<std::string> switches_;
    std::vector<Link> links_;
    std::map<std::string, Host> hosts_;
    std::map<std::string, std::vector<Adjacency>, std::less<>> adjacency_;
    std::map<PortRef, std::string> port_owner_;   // what occupies each port
    std::map<PortRef, std::string> host_ports_;   // attachment -> host name
};

struct Region {
    std::string name;
    std::set<std::string> switches;
    std::set<std::string> hosts;   // derived from attachment
};

struct NetworkDefaults {
    int default_priority = kDefaultPriority;
    BitsPerSecond link_capacity = 1 * kGbps;
    std::size_t table_capacity = 2000;
};

struct IntraRegion {
    std::string region;
    bool operator==(const IntraRegion&) const = default;
};

struct InterRegion {
    std::string from;
    std::string to;
    bool operator==(const InterRegion&) const = default;
};

using FlowSpan = std::variant<IntraRegion, InterRegion>;

class NetworkConfig {
public:
    const Topology& topology() const { return topology_; }
    const std::vector<Region>& regions() const { return regions_; }
    const NetworkDefaults& defaults() const { return defaults_; }
    NetworkDefaults& defaults() { return defaults_; }

    /// Region containing a host (via its attachment switch) or a switch.
    /// Throws NotFound.
    const Region& region_of(std::string_view host_or_switch) const;
    const Region* find_region(std::string_view name) const;

    /// Throws NotFound for unknown hosts.
    FlowSpan classify_flow_span(std::string_view src_host, std::string_view dst_host) const;

private:
    friend class NetworkConfigBuilder;

    Topology topology_;
    std::vector<Region> regions_;
    NetworkDefaults defaults_;
    std::map<std::string, std::size_t, std::less<>> region_index_;   // switch -> region
};

/// Assembles a NetworkConfig; build() checks every invariant and throws
/// ValidationError naming the offending element.
class NetworkConfigBuilder {
public:
    NetworkConfigBuilder& add_switch(std::string id);
    NetworkConfigBuilder& add_link(PortRef a, PortRef b, std::optional<BitsPerSecond> capacity = {});
    NetworkConfigBuilder& add_host(std::string name, PortRef attach);
    NetworkConfigBuilder& add_region(std::string name, std::vector<std::string> switches);
    NetworkConfigBuilder& defaults(NetworkDefaults d);

    NetworkConfig build() const;

private:
    struct PendingLink {
        PortRef a, b;
        std::optional<BitsPerSecond> capacity;
    };

    std::vector<std::string> switches_;
    std::vector<PendingLink> links_;
    std::vector<std::pair<std::string, PortRef>> hosts_;
    std::vector<std::pair<std::string, std::vector<std::string>>> regions_;
    NetworkDefaults defaults_;
};

/// JSON config: switches [{id}], links [{a, b, capacity_mbps}],
/// hosts [{name, attach}], regions [{name, switches}].
/// Throws FormatError (syntax/shape) or ValidationError (invariants).
NetworkConfig parse_config(std::string_view json_text);
NetworkConfig load_config(const std::filesystem::path& path);

} // namespace osdf
