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

#include "osdf/network.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "osdf/error.hpp"

namespace osdf {

PortRef parse_port_ref(std::string_view text)
{
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size())
        throw FormatError("expected '<device>:<port>', got '" + std::string(text) + "'");
    std::uint32_t port = 0;
    const char* first = text.data() + colon + 1;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, port);
    if (ec != std::errc() || ptr != last || port == 0)
        throw FormatError("invalid port number in '" + std::string(text) + "'");
    return {std::string(text.substr(0, colon)), port};
}

std::string to_string(const PortRef& p)
{
    return p.device + ":" + std::to_string(p.port);
}

/* Topology */

bool Topology::has_switch(std::string_view id) const
{
    return switches_.contains(std::string(id));
}

bool Topology::has_port(std::string_view sw, std::uint32_t port) const
{
    return port_owner_.contains(PortRef{std::string(sw), port});
}

std::set<std::uint32_t> Topology::ports(std::string_view sw) const
{
    std::set<std::uint32_t> out;
    for (auto it = port_owner_.lower_bound(PortRef{std::string(sw), 0});
         it != port_owner_.end() && it->first.device == sw; ++it)
        out.insert(it->first.port);
    return out;
}

const Host& Topology::host(std::string_view name) const
{
    const Host* h = find_host(name);
    if (h == nullptr)
        throw NotFound("unknown host '" + std::string(name) + "'");
    return *h;
}

const Host* Topology::find_host(std::string_view name) const
{
    auto it = hosts_.find(std::string(name));
    return it == hosts_.end() ? nullptr : &it->second;
}

const std::vector<Adjacency>& Topology::neighbors(std::string_view sw) const
{
    static const std::vector<Adjacency> none;
    auto it = adjacency_.find(sw);
    return it == adjacency_.end() ? none : it->second;
}

std::optional<std::size_t> Topology::link_at(std::string_view sw, std::uint32_t port) const
{
    for (const auto& adj : neighbors(sw)) {
        if (adj.port == port)
            return adj.link;
    }
    return std::nullopt;
}

const Host* Topology::host_at(std::string_view sw, std::uint32_t port) const
{
    auto it = host_ports_.find(PortRef{std::string(sw), port});
    if (it == host_ports_.end())
        return nullptr;
    return find_host(it->second);
}

/* NetworkConfig */

const Region& NetworkConfig::region_of(std::string_view name) const
{
    std::string_view sw = name;
    if (const Host* h = topology_.find_host(name))
        sw = h->attach.device;
    auto it = region_index_.find(sw);
    if (it == region_index_.end())
        throw NotFound("unknown host or switch '" + std::string(name) + "'");
    return regions_[it->second];
}

const Region* NetworkConfig::find_region(std::string_view name) const
{
    for (const auto& r : regions_) {
        if (r.name == name)
            return &r;
    }
    return nullptr;
}

FlowSpan NetworkConfig::classify_flow_span(std::string_view src_host,
                                           std::string_view dst_host) const
{
    const Host& src = topology_.host(src_host);
    const Host& dst = topology_.host(dst_host);
    const Region& a = region_of(src.attach.device);
    const Region& b = region_of(dst.attach.device);
    if (a.name == b.name)
        return IntraRegion{a.name};
    return InterRegion{a.name, b.name};
}

/* NetworkConfigBuilder */

NetworkConfigBuilder& NetworkConfigBuilder::add_switch(std::string id)
{
    switches_.push_back(std::move(id));
    return *this;
}

NetworkConfigBuilder& NetworkConfigBuilder::add_link(PortRef a, PortRef b,
                                                     std::optional<BitsPerSecond> capacity)
{
    links_.push_back({std::move(a), std::move(b), capacity});
    return *this;
}

NetworkConfigBuilder& NetworkConfigBuilder::add_host(std::string name, PortRef attach)
{
    hosts_.emplace_back(std::move(name), std::move(attach));
    return *this;
}

NetworkConfigBuilder& NetworkConfigBuilder::add_region(std::string name,
                                                       std::vector<std::string> switches)
{
    regions_.emplace_back(std::move(name), std::move(switches));
    return *this;
}

NetworkConfigBuilder& NetworkConfigBuilder::defaults(NetworkDefaults d)
{
    defaults_ = d;
    return *this;
}

namespace {

std::string synthesize_address(std::size_t index)
{
    return "10.0." + std::to_string(index / 254) + "." + std::to_string(index % 254 + 1);
}

} // namespace

NetworkConfig NetworkConfigBuilder::build() const
{
    NetworkConfig cfg;
    cfg.defaults_ = defaults_;
    Topology& topo = cfg.topology_;

    for (std::size_t i = 0; i < switches_.size(); ++i) {
        const std::string where = "switches[" + std::to_string(i) + "]";
        if (switches_[i].empty())
            throw ValidationError(where + ": empty switch id");
        if (!topo.switches_.insert(switches_[i]).second)
            throw ValidationError(where + ": duplicate switch '" + switches_[i] + "'");
    }

    auto claim = [&](const PortRef& p, const std::string& owner, const std::string& where) {
        if (!topo.switches_.contains(p.device))
            throw ValidationError(where + ": undeclared switch '" + p.device + "'");
        auto [it, inserted] = topo.port_owner_.emplace(p, owner);
        if (!inserted)
            throw ValidationError(where + ": port " + to_string(p) + " already used by " +
                                  it->second);
    };

    for (std::size_t i = 0; i < links_.size(); ++i) {
        const auto& l = links_[i];
        const std::string where = "links[" + std::to_string(i) + "]";
        const BitsPerSecond cap = l.capacity.value_or(defaults_.link_capacity);
        if (cap == 0)
            throw ValidationError(where + ": link capacity must be positive");
        if (l.a == l.b)
            throw ValidationError(where + ": link endpoints are the same port");
        claim(l.a, "link to " + to_string(l.b), where + ".a");
        claim(l.b, "link to " + to_string(l.a), where + ".b");
        topo.links_.push_back({l.a, l.b, cap});
        topo.adjacency_[l.a.device].push_back({l.a.port, l.b.device, l.b.port, i});
        topo.adjacency_[l.b.device].push_back({l.b.port, l.a.device, l.a.port, i});
    }
    for (auto& [sw, adj] : topo.adjacency_) {
        std::sort(adj.begin(), adj.end(),
                  [](const Adjacency& x, const Adjacency& y) { return x.port < y.port; });
    }

    for (std::size_t i = 0; i < hosts_.size(); ++i) {
        const auto& [name, attach] = hosts_[i];
        const std::string where = "hosts[" + std::to_string(i) + "]";
        if (name.empty())
            throw ValidationError(where + ": empty host name");
        if (topo.switches_.contains(name))
            throw ValidationError(where + ": host name '" + name + "' collides with a switch");
        if (topo.hosts_.contains(name))
            throw ValidationError(where + ": duplicate host '" + name + "'");
        claim(attach, "host " + name, where + ".attach");
        topo.host_ports_.emplace(attach, name);
        topo.hosts_.emplace(name, Host{name, attach, synthesize_address(i)});
    }

    std::set<std::string> region_names;
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        const auto& [name, members] = regions_[i];
        const std::string where = "regions[" + std::to_string(i) + "]";
        if (name.empty())
            throw ValidationError(where + ": empty region name");
        if (!region_names.insert(name).second)
            throw ValidationError(where + ": duplicate region '" + name + "'");
        Region r{name, {}, {}};
        for (const auto& sw : members) {
            if (!topo.switches_.contains(sw))
                throw ValidationError(where + ": undeclared switch '" + sw + "'");
            auto [it, inserted] = cfg.region_index_.emplace(sw, cfg.regions_.size());
            if (!inserted)
                throw ValidationError(where + ": switch '" + sw + "' already belongs to region '" +
                                      cfg.regions_[it->second].name + "'");
            r.switches.insert(sw);
        }
        cfg.regions_.push_back(std::move(r));
    }
    for (const auto& sw : topo.switches_) {
        if (!cfg.region_index_.contains(sw))
            throw ValidationError("switch '" + sw + "' belongs to no region");
    }
    for (const auto& [name, host] : topo.hosts_)
        cfg.regions_[cfg.region_index_.find(host.attach.device)->second].hosts.insert(name);

    return cfg;
}

/* JSON loading */

namespace {

using nlohmann::json;

const json& member(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object())
        throw FormatError(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw FormatError(where + ": missing key '" + key + "'");
    return *it;
}

std::string string_member(const json& obj, const char* key, const std::string& where)
{
    const json& v = member(obj, key, where);
    if (!v.is_string())
        throw FormatError(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

const json& array_member(const json& root, const char* key)
{
    const json& v = member(root, key, "config");
    if (!v.is_array())
        throw FormatError(std::string(key) + ": expected an array");
    return v;
}

PortRef port_member(const json& obj, const char* key, const std::string& where)
{
    try {
        return parse_port_ref(string_member(obj, key, where));
    } catch (const FormatError& e) {
        throw FormatError(where + "." + key + ": " + e.what());
    }
}

} // namespace

NetworkConfig parse_config(std::string_view json_text)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw FormatError("config: expected a JSON object");

    NetworkConfigBuilder b;

    const json& switches = array_member(root, "switches");
    for (std::size_t i = 0; i < switches.size(); ++i)
        b.add_switch(string_member(switches[i], "id", "switches[" + std::to_string(i) + "]"));

    const json& links = array_member(root, "links");
    for (std::size_t i = 0; i < links.size(); ++i) {
        const std::string where = "links[" + std::to_string(i) + "]";
        std::optional<BitsPerSecond> cap;
        if (links[i].is_object() && links[i].contains("capacity_mbps")) {
            const json& c = links[i]["capacity_mbps"];
            if (!c.is_number_unsigned() && !(c.is_number_integer() && c.get<long long>() >= 0))
                throw FormatError(where + ".capacity_mbps: expected a non-negative integer");
            cap = c.get<BitsPerSecond>() * kMbps;
        }
        b.add_link(port_member(links[i], "a", where), port_member(links[i], "b", where), cap);
    }

    const json& hosts = array_member(root, "hosts");
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        const std::string where = "hosts[" + std::to_string(i) + "]";
        b.add_host(string_member(hosts[i], "name", where), port_member(hosts[i], "attach", where));
    }

    const json& regions = array_member(root, "regions");
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const std::string where = "regions[" + std::to_string(i) + "]";
        const json& members = member(regions[i], "switches", where);
        if (!members.is_array())
            throw FormatError(where + ".switches: expected an array");
        std::vector<std::string> sws;
        for (const auto& m : members) {
            if (!m.is_string())
                throw FormatError(where + ".switches: expected switch id strings");
            sws.push_back(m.get<std::string>());
        }
        b.add_region(string_member(regions[i], "name", where), std::move(sws));
    }

    return b.build();
}

NetworkConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace osdf
