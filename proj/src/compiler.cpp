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

#include "osdf/compiler.hpp"

#include <deque>
#include <map>
#include <stdexcept>

#include "osdf/error.hpp"

namespace osdf {

bool MatchFields::matches(const MatchFields& packet) const
{
    if (src_address != packet.src_address || dst_address != packet.dst_address ||
        transport != packet.transport || dst_port != packet.dst_port)
        return false;
    if (src_port && src_port != packet.src_port)
        return false;
    return !in_port || in_port == packet.in_port;
}

std::vector<std::string> Path::switch_ids() const
{
    std::vector<std::string> out;
    out.reserve(hops.size());
    for (const auto& h : hops)
        out.push_back(h.switch_id);
    return out;
}

MatchFields build_selector(const ApplicationRegistry& registry, std::string_view application,
                           std::string_view src_host, std::string_view dst_host,
                           const Topology& topology)
{
    const ApplicationEntry* app = registry.find(application);
    if (app == nullptr)
        throw UnknownApplication("unknown application '" + std::string(application) + "'");
    const Host& src = topology.host(src_host);
    const Host& dst = topology.host(dst_host);

    MatchFields m;
    m.src_host = src.name;
    m.dst_host = dst.name;
    m.src_address = src.address;
    m.dst_address = dst.address;
    m.transport = app->transport;
    m.dst_port = app->dst_port;
    return m;
}

/* path selection */

namespace {

// Hop counts to `target` from every switch.
std::map<std::string, std::size_t, std::less<>> distances_to(const Topology& topo,
                                                             const std::string& target)
{
    std::map<std::string, std::size_t, std::less<>> dist;
    dist[target] = 0;
    std::deque<std::string> queue{target};
    while (!queue.empty()) {
        const std::string sw = queue.front();
        queue.pop_front();
        const std::size_t d = dist[sw];
        for (const auto& adj : topo.neighbors(sw)) {
            if (dist.emplace(adj.neighbor, d + 1).second)
                queue.push_back(adj.neighbor);
        }
    }
    return dist;
}

class PathWalker {
public:
    PathWalker(const Topology& topo, const Host& src)
        : topo_(topo)
        , current_{src.attach.device, src.attach.port, 0}
    { }

    const std::string& at() const { return current_.switch_id; }

    // Shortest walk to `target`; among equal-length walks take the smallest
    // next switch id at every step, then the lowest local port.
    void walk_to(const std::string& target)
    {
        if (at() == target)
            return;
        const auto dist = distances_to(topo_, target);
        auto it = dist.find(at());
        if (it == dist.end())
            throw NoPath("no path from " + at() + " to " + target);
        std::size_t remaining = it->second;
        while (remaining > 0) {
            const Adjacency* best = nullptr;
            for (const auto& adj : topo_.neighbors(at())) {
                auto d = dist.find(adj.neighbor);
                if (d == dist.end() || d->second != remaining - 1)
                    continue;
                if (best == nullptr || adj.neighbor < best->neighbor)
                    best = &adj;
            }
            leave_through(*best);
            --remaining;
        }
    }

    // Leave the current switch via `port`; false if the port carries no link.
    bool exit_via(std::uint32_t port)
    {
        for (const auto& adj : topo_.neighbors(at())) {
            if (adj.port == port) {
                leave_through(adj);
                return true;
            }
        }
        return false;
    }

    std::vector<Hop> finish(std::uint32_t out_port)
    {
        current_.out_port = out_port;
        hops_.push_back(current_);
        return std::move(hops_);
    }

private:
    void leave_through(const Adjacency& adj)
    {
        current_.out_port = adj.port;
        hops_.push_back(current_);
        current_ = Hop{adj.neighbor, adj.neighbor_port, 0};
    }

    const Topology& topo_;
    Hop current_;
    std::vector<Hop> hops_;
};

} // namespace

Path select_path(const Topology& topology, std::string_view src_host, std::string_view dst_host,
                 std::span<const Waypoint> waypoints)
{
    const Host& src = topology.host(src_host);
    const Host& dst = topology.host(dst_host);

    PathWalker walker(topology, src);
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        const Waypoint& w = waypoints[i];
        if (!topology.has_switch(w.device))
            throw NoPath("waypoint device '" + w.device + "' does not exist");
        walker.walk_to(w.device);
        if (!w.egress_port)
            continue;
        if (walker.exit_via(*w.egress_port))
            continue;
        // A host-facing waypoint port can only be the final exit.
        const Host* h = topology.host_at(w.device, *w.egress_port);
        if (h != nullptr && h->name == dst.name && i + 1 == waypoints.size())
            return Path{src.name, dst.name, walker.finish(*w.egress_port)};
        throw NoPath("waypoint " + w.device + ":" + std::to_string(*w.egress_port) +
                     " cannot be satisfied");
    }
    walker.walk_to(dst.attach.device);
    return Path{src.name, dst.name, walker.finish(dst.attach.port)};
}

/* compilation */

bool covers_flow(const Policy& policy, std::string_view src_host, std::string_view dst_host,
                 const NetworkConfig& config)
{
    const FlowSpan span = config.classify_flow_span(src_host, dst_host);
    if (policy.op_class().scope == SiteScope::Intra) {
        const auto* intra = std::get_if<IntraRegion>(&span);
        if (intra == nullptr || intra->region != policy.source_region)
            return false;
    } else {
        const auto* inter = std::get_if<InterRegion>(&span);
        if (inter == nullptr || inter->from != policy.source_region ||
            inter->to != policy.destination_region)
            return false;
    }
    return policy.address_space.hosts.covers(
        HostPair(std::string(src_host), std::string(dst_host)));
}

std::vector<FlowRule> compile(const Policy& policy, const FlowEndpoints& flow,
                              const NetworkConfig& config, const ApplicationRegistry& registry,
                              Path* path_out)
{
    if (!covers_flow(policy, flow.src_host, flow.dst_host, config))
        throw PolicyNotApplicable("policy " + to_string(policy.id) + " does not cover flow " +
                                  flow.src_host + "->" + flow.dst_host);

    MatchFields match = build_selector(registry, policy.profile.application, flow.src_host,
                                       flow.dst_host, config.topology());
    match.src_port = flow.src_port;

    std::vector<FlowRule> rules;
    if (policy.op_class().kind == OperationKind::Alert) {
        const Host& src = config.topology().host(flow.src_host);
        match.in_port = src.attach.port;
        rules.push_back({src.attach.device, match, LogAndDrop{}, policy.priority, std::nullopt,
                         policy.id});
        if (path_out != nullptr)
            *path_out = Path{flow.src_host, flow.dst_host, {}};
        return rules;
    }

    Path path = select_path(config.topology(), flow.src_host, flow.dst_host,
                            policy.address_space.waypoints);
    std::optional<MeterSpec> meter;
    if (auto rate = policy.rate_limit())
        meter = MeterSpec{*rate};
    rules.reserve(path.hops.size());
    // Matching on the ingress port keeps a switch visited twice unambiguous.
    for (const auto& hop : path.hops) {
        match.in_port = hop.in_port;
        rules.push_back({hop.switch_id, match, ForwardToPort{hop.out_port}, policy.priority,
                         meter, policy.id});
    }
    if (path_out != nullptr)
        *path_out = std::move(path);
    return rules;
}

std::vector<FlowRule> compile(const Policy& policy, const FlowEndpoints& flow,
                              const NetworkConfig& config, const ApplicationRegistry& registry)
{
    return compile(policy, flow, config, registry, nullptr);
}

FlowRule reverse_rule(const FlowRule& forward, const Hop& hop)
{
    if (!forward.match.src_port)
        throw std::invalid_argument("reverse_rule needs a forward rule with a source port");
    FlowRule r = forward;
    std::swap(r.match.src_host, r.match.dst_host);
    std::swap(r.match.src_address, r.match.dst_address);
    // Return traffic runs from the service port back to the client port.
    r.match.src_port = forward.match.dst_port;
    r.match.dst_port = *forward.match.src_port;
    r.match.in_port = hop.out_port;
    r.action = ForwardToPort{hop.in_port};
    return r;
}

std::string render_rate(BitsPerSecond rate)
{
    if (rate % kGbps == 0)
        return std::to_string(rate / kGbps) + "Gbps";
    if (rate % kMbps == 0)
        return std::to_string(rate / kMbps) + "Mbps";
    return std::to_string(rate) + "bps";
}

std::string render_action(const RuleAction& a)
{
    if (const auto* fwd = std::get_if<ForwardToPort>(&a))
        return "output:" + std::to_string(fwd->port);
    if (std::holds_alternative<LogAndDrop>(a))
        return "log-drop";
    return "drop";
}

std::string render_rule(const FlowRule& rule)
{
    std::string out = rule.switch_id + " pri=" + std::to_string(rule.priority) + " match=" +
                      std::string(to_string(rule.match.transport)) + "/" +
                      std::to_string(rule.match.dst_port) + " " + rule.match.src_host;
    if (rule.match.src_port)
        out += ":" + std::to_string(*rule.match.src_port);
    out += "->" + rule.match.dst_host + " action=" + render_action(rule.action);
    if (rule.meter)
        out += " meter=" + render_rate(rule.meter->rate);
    return out;
}

} // namespace osdf
