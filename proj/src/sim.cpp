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

#include "osdf/sim.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "osdf/error.hpp"

namespace osdf {

using nlohmann::json;

std::string_view to_string(InstallMode m)
{
    return m == InstallMode::OsdfPreinstall ? "osdf" : "reactive";
}

std::string_view to_string(DropReason r)
{
    switch (r) {
    case DropReason::NoPolicy:      return "no-policy";
    case DropReason::Alert:         return "alert";
    case DropReason::NoPath:        return "no-path";
    case DropReason::TableOverflow: return "table-overflow";
    }
    return "?";
}

FlowRequest make_request(const ApplicationRegistry& registry, std::string_view application,
                         std::string src_host, std::string dst_host, BitsPerSecond demand,
                         std::optional<std::uint16_t> src_port)
{
    const ApplicationEntry* app = registry.find(application);
    if (app == nullptr)
        throw UnknownApplication("unknown application '" + std::string(application) + "'");
    return FlowRequest{std::move(src_host), std::move(dst_host), app->transport, app->dst_port,
                       src_port, demand};
}

/* event log */

EventCounts count_events(std::span<const SimEvent> events)
{
    EventCounts c;
    for (const auto& e : events) {
        std::visit(
            [&](const auto& b) {
                using T = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<T, event::PacketIn>)
                    ++c.packet_in;
                else if constexpr (std::is_same_v<T, event::RuleInstall>)
                    ++c.rule_install;
                else if constexpr (std::is_same_v<T, event::RuleRemove>)
                    ++c.rule_remove;
                else if constexpr (std::is_same_v<T, event::AlertLogged>)
                    ++c.alert_logged;
                else if constexpr (std::is_same_v<T, event::FlowAdmitted>)
                    ++c.admitted;
                else if constexpr (std::is_same_v<T, event::FlowDropped>)
                    ++c.dropped;
                else if constexpr (std::is_same_v<T, event::FlowRerouted>)
                    ++c.rerouted;
            },
            e.body);
    }
    return c;
}

const SimEvent& SimLog::append(EventBody body)
{
    events_.push_back(SimEvent{events_.size() + 1, std::move(body)});
    return events_.back();
}

std::string event_to_json(const SimEvent& e)
{
    json j;
    j["seq"] = e.seq;
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, event::PacketIn>) {
                j["event"] = "packet_in";
                j["switch"] = b.switch_id;
                j["flow"] = b.flow;
            } else if constexpr (std::is_same_v<T, event::RuleInstall>) {
                j["event"] = "rule_install";
                j["switch"] = b.switch_id;
                j["flow"] = b.flow;
                j["policy"] = to_string(b.rule.policy);
                j["rule"] = render_rule(b.rule);
                if (b.reverse)
                    j["reverse"] = render_rule(*b.reverse);
            } else if constexpr (std::is_same_v<T, event::RuleRemove>) {
                j["event"] = "rule_remove";
                j["switch"] = b.switch_id;
                j["flow"] = b.flow;
                j["entries"] = b.entries;
            } else if constexpr (std::is_same_v<T, event::AlertLogged>) {
                j["event"] = "alert_logged";
                j["flow"] = b.flow;
                j["policy"] = to_string(b.policy);
            } else if constexpr (std::is_same_v<T, event::FlowAdmitted>) {
                j["event"] = "flow_admitted";
                j["flow"] = b.flow;
                j["policy"] = to_string(b.policy);
                j["path"] = b.path;
            } else if constexpr (std::is_same_v<T, event::FlowDropped>) {
                j["event"] = "flow_dropped";
                j["flow"] = b.flow;
                j["reason"] = std::string(to_string(b.reason));
            } else if constexpr (std::is_same_v<T, event::FlowRerouted>) {
                j["event"] = "flow_rerouted";
                j["flow"] = b.flow;
                j["from"] = to_string(b.from);
                j["to"] = to_string(b.to);
                j["path"] = b.path;
            } else if constexpr (std::is_same_v<T, event::PolicyAdded>) {
                j["event"] = "policy_added";
                j["policy"] = to_string(b.policy);
            } else {
                j["event"] = "policy_removed";
                j["policy"] = to_string(b.policy);
            }
        },
        e.body);
    return j.dump();
}

std::string SimLog::to_jsonl() const
{
    std::string out;
    for (const auto& e : events_) {
        out += event_to_json(e);
        out += '\n';
    }
    return out;
}

/* switch tables */

SwitchState::SwitchState(std::string id, std::size_t capacity)
    : id_(std::move(id))
    , capacity_(capacity)
{ }

const TableEntry* SwitchState::lookup(const MatchFields& packet) const
{
    for (const auto& e : table_) {
        if (e.rule.match.matches(packet))
            return &e;
    }
    return nullptr;
}

void SwitchState::install(FlowRule rule, FlowId flow, std::uint64_t seq)
{
    if (table_.size() >= capacity_)
        throw std::length_error("flow table of " + id_ + " is full");
    // Later installs go behind every entry of equal or higher priority.
    auto pos = std::find_if(table_.begin(), table_.end(), [&](const TableEntry& e) {
        return e.rule.priority < rule.priority;
    });
    table_.insert(pos, TableEntry{std::move(rule), flow, seq});
}

std::size_t SwitchState::remove_flow(FlowId flow)
{
    return std::erase_if(table_, [&](const TableEntry& e) { return e.flow == flow; });
}

/* simulator */

namespace {

bool is_active(const FlowRecord& f)
{
    return f.state != FlowState::Dropped;
}

bool is_route(const FlowRule& r)
{
    return std::holds_alternative<ForwardToPort>(r.action);
}

FlowEndpoints endpoints(const FlowRequest& req)
{
    return FlowEndpoints{req.src_host, req.dst_host, req.src_port};
}

} // namespace

Simulator::Simulator(NetworkConfig config, PolicyStore policies, ApplicationRegistry registry,
                     SimOptions options)
    : config_(std::move(config))
    , store_(std::move(policies))
    , registry_(std::move(registry))
{
    const std::size_t capacity = options.table_capacity.value_or(config_.defaults().table_capacity);
    for (const auto& sw : config_.topology().switches())
        switches_.emplace(sw, SwitchState(sw, capacity));
}

const SwitchState& Simulator::switch_state(std::string_view id) const
{
    auto it = switches_.find(id);
    if (it == switches_.end())
        throw NotFound("unknown switch '" + std::string(id) + "'");
    return it->second;
}

std::vector<SimEvent> Simulator::since(std::size_t mark) const
{
    const auto& ev = log_.events();
    return {ev.begin() + static_cast<std::ptrdiff_t>(mark), ev.end()};
}

std::optional<Policy> Simulator::select_policy(const FlowRequest& req) const
{
    const FlowSpan span = config_.classify_flow_span(req.src_host, req.dst_host);
    const SiteScope scope =
        std::holds_alternative<IntraRegion>(span) ? SiteScope::Intra : SiteScope::Inter;

    std::optional<Policy> best;
    auto consider = [&](const Policy& p) {
        const ApplicationEntry* app = registry_.find(p.profile.application);
        if (app == nullptr || app->transport != req.transport || app->dst_port != req.dst_port)
            return;
        if (!covers_flow(p, req.src_host, req.dst_host, config_))
            return;
        if (!best || p.priority > best->priority ||
            (p.priority == best->priority && p.id < best->id))
            best = p;
    };
    for (const auto& p : store_.filter_by_operation({OperationKind::Route, scope}))
        consider(p);
    for (const auto& p : store_.filter_by_operation({OperationKind::Alert, scope}))
        consider(p);
    return best;
}

MatchFields Simulator::packet_fields(const FlowRequest& req) const
{
    const Topology& topo = config_.topology();
    MatchFields m;
    m.src_host = req.src_host;
    m.dst_host = req.dst_host;
    m.src_address = topo.host(req.src_host).address;
    m.dst_address = topo.host(req.dst_host).address;
    m.transport = req.transport;
    m.dst_port = req.dst_port;
    m.src_port = req.src_port;
    return m;
}

bool Simulator::port_in_use(const FlowRequest& req) const
{
    return std::any_of(flows_.begin(), flows_.end(), [&](const auto& kv) {
        const FlowRequest& o = kv.second.request;
        return is_active(kv.second) && o.src_host == req.src_host && o.dst_host == req.dst_host &&
               o.transport == req.transport && o.dst_port == req.dst_port &&
               o.src_port == req.src_port;
    });
}

bool Simulator::tables_fit(const std::vector<FlowRule>& rules, FlowId flow) const
{
    std::map<std::string, std::size_t, std::less<>> needed;
    for (const auto& rule : rules) {
        const SwitchState& st = switches_.at(rule.switch_id);
        const bool present = std::any_of(st.table().begin(), st.table().end(),
                                         [&](const TableEntry& e) {
                                             return e.flow == flow && e.rule == rule;
                                         });
        if (!present)
            needed[rule.switch_id] += is_route(rule) ? 2 : 1;
    }
    for (const auto& [sw, n] : needed) {
        if (switches_.at(sw).free_entries() < n)
            return false;
    }
    return true;
}

void Simulator::install(const FlowRule& rule, const std::optional<Hop>& hop, FlowId flow)
{
    SwitchState& st = switches_.at(rule.switch_id);
    std::optional<FlowRule> reverse;
    if (hop)
        reverse = reverse_rule(rule, *hop);
    st.install(rule, flow, ++install_seq_);
    if (reverse)
        st.install(*reverse, flow, ++install_seq_);
    log_.append(event::RuleInstall{rule.switch_id, flow, rule, std::move(reverse)});
}

void Simulator::remove_rules(FlowId flow)
{
    for (auto& [id, st] : switches_) {
        if (const std::size_t n = st.remove_flow(flow); n > 0)
            log_.append(event::RuleRemove{id, flow, n});
    }
}

void Simulator::drop(FlowRecord& flow, DropReason reason)
{
    flow.state = reason == DropReason::Alert ? FlowState::Blocked : FlowState::Dropped;
    if (reason != DropReason::Alert)
        flow.policy.reset();
    flow.path.hops.clear();
    log_.append(event::FlowDropped{flow.id, reason});
}

bool Simulator::handle_packet_in(FlowRecord& flow, const std::string& sw, std::uint32_t in_port,
                                 InstallMode mode)
{
    log_.append(event::PacketIn{sw, flow.id});

    const auto winner = select_policy(flow.request);
    if (!winner) {
        drop(flow, DropReason::NoPolicy);
        return false;
    }
    Path path;
    std::vector<FlowRule> rules;
    try {
        rules = compile(*winner, endpoints(flow.request), config_, registry_, &path);
    } catch (const NoPath&) {
        drop(flow, DropReason::NoPath);
        return false;
    }
    // Checked against the whole path even when installing one hop, so a
    // flow never ends up half-installed.
    if (!tables_fit(rules, flow.id)) {
        drop(flow, DropReason::TableOverflow);
        return false;
    }
    flow.policy = winner->id;

    if (!is_route(rules.front())) {
        install(rules.front(), std::nullopt, flow.id);
        return true;
    }
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const Hop& hop = path.hops[i];
        if (mode == InstallMode::OsdfPreinstall || (hop.switch_id == sw && hop.in_port == in_port))
            install(rules[i], hop, flow.id);
    }
    return true;
}

void Simulator::walk(FlowRecord& flow, InstallMode mode)
{
    const Topology& topo = config_.topology();
    const Host& src = topo.host(flow.request.src_host);
    MatchFields packet = packet_fields(flow.request);

    std::string sw = src.attach.device;
    std::uint32_t in_port = src.attach.port;
    std::vector<Hop> hops;
    // Waypoints may revisit switches, but never more than a few times each.
    const std::size_t limit = 4 * (topo.switches().size() + 1);
    for (std::size_t step = 0; step < limit; ++step) {
        packet.in_port = in_port;
        const TableEntry* entry = switches_.at(sw).lookup(packet);
        if (entry == nullptr) {
            if (!handle_packet_in(flow, sw, in_port, mode))
                return;
            entry = switches_.at(sw).lookup(packet);
            if (entry == nullptr)
                throw std::logic_error("controller installed no rule at " + sw);
        }
        const FlowRule& rule = entry->rule;
        const auto* fwd = std::get_if<ForwardToPort>(&rule.action);
        if (fwd == nullptr) {
            flow.policy = rule.policy;
            log_.append(event::AlertLogged{flow.id, rule.policy});
            drop(flow, DropReason::Alert);
            return;
        }
        hops.push_back(Hop{sw, in_port, fwd->port});

        if (auto link = topo.link_at(sw, fwd->port)) {
            const Link& l = topo.links()[*link];
            const PortRef& next = (l.a.device == sw && l.a.port == fwd->port) ? l.b : l.a;
            sw = next.device;
            in_port = next.port;
            continue;
        }
        const Host* h = topo.host_at(sw, fwd->port);
        if (h != nullptr && h->name == flow.request.dst_host) {
            flow.state = FlowState::Admitted;
            flow.policy = rule.policy;
            flow.path = Path{flow.request.src_host, flow.request.dst_host, std::move(hops)};
            log_.append(event::FlowAdmitted{flow.id, rule.policy, flow.path.switch_ids()});
            return;
        }
        break;
    }
    remove_rules(flow.id);
    drop(flow, DropReason::NoPath);
}

std::vector<SimEvent> Simulator::inject_flow(const FlowRequest& req_in, InstallMode mode)
{
    const Topology& topo = config_.topology();
    topo.host(req_in.src_host);
    topo.host(req_in.dst_host);
    if (req_in.demand == 0)
        throw ValidationError("flow " + req_in.src_host + "->" + req_in.dst_host +
                              ": demand must be positive");

    FlowRequest req = req_in;
    if (req.src_port) {
        if (port_in_use(req))
            throw ValidationError("flow " + req.src_host + ":" + std::to_string(*req.src_port) +
                                  "->" + req.dst_host + " is already active");
    } else {
        constexpr std::uint32_t kFirst = 49152;
        constexpr std::uint32_t kRange = 65536 - kFirst;
        for (std::uint32_t tries = 0;; ++tries) {
            if (tries == kRange)
                throw ValidationError("no free ephemeral port for " + req.src_host);
            req.src_port = next_ephemeral_;
            next_ephemeral_ = next_ephemeral_ == 65535 ? kFirst : next_ephemeral_ + 1;
            if (!port_in_use(req))
                break;
        }
    }

    const std::size_t mark = log_.size();
    const FlowId id = next_flow_++;
    FlowRecord& flow = flows_.emplace(id, FlowRecord{id, req, FlowState::Dropped, std::nullopt, {}}).first->second;
    walk(flow, mode);
    return since(mark);
}

void Simulator::reinstall(FlowRecord& flow, const std::optional<Policy>& winner)
{
    const PolicyId previous = flow.policy.value_or(PolicyId{});
    remove_rules(flow.id);
    if (!winner) {
        drop(flow, DropReason::NoPolicy);
        return;
    }
    Path path;
    std::vector<FlowRule> rules;
    try {
        rules = compile(*winner, endpoints(flow.request), config_, registry_, &path);
    } catch (const NoPath&) {
        drop(flow, DropReason::NoPath);
        return;
    }
    if (!tables_fit(rules, flow.id)) {
        drop(flow, DropReason::TableOverflow);
        return;
    }
    flow.policy = winner->id;
    if (!is_route(rules.front())) {
        install(rules.front(), std::nullopt, flow.id);
        log_.append(event::AlertLogged{flow.id, winner->id});
        drop(flow, DropReason::Alert);
        return;
    }
    for (std::size_t i = 0; i < rules.size(); ++i)
        install(rules[i], path.hops[i], flow.id);
    flow.state = FlowState::Admitted;
    flow.path = std::move(path);
    log_.append(event::FlowRerouted{flow.id, previous, winner->id, flow.path.switch_ids()});
}

std::vector<SimEvent> Simulator::apply_policy_change(const PolicyChange& change)
{
    const std::size_t mark = log_.size();
    if (const auto* add = std::get_if<PolicyChange::Add>(&change.change)) {
        const PolicyId id = store_.add(add->policy);
        log_.append(event::PolicyAdded{id});
    } else {
        const auto& rm = std::get<PolicyChange::Remove>(change.change);
        store_.remove(rm.id);
        log_.append(event::PolicyRemoved{rm.id});
    }

    for (auto& [id, flow] : flows_) {
        if (!is_active(flow))
            continue;
        const auto winner = select_policy(flow.request);
        const std::optional<PolicyId> now =
            winner ? std::optional<PolicyId>(winner->id) : std::nullopt;
        if (now != flow.policy)
            reinstall(flow, winner);
    }
    return since(mark);
}

ThroughputReport Simulator::solve_throughput() const
{
    const Topology& topo = config_.topology();
    ThroughputReport report;
    FluidNetwork net;

    // Links are full duplex: each direction is its own capacity. Index 2l is
    // a->b and 2l+1 is b->a.
    for (const auto& l : topo.links()) {
        const auto c = static_cast<double>(l.capacity);
        report.links.push_back({to_string(l.a) + "->" + to_string(l.b), c, 0.0});
        report.links.push_back({to_string(l.b) + "->" + to_string(l.a), c, 0.0});
        net.capacity.push_back(c);
        net.capacity.push_back(c);
    }
    // Host access links at the default capacity; up then down per host.
    std::map<std::string, std::size_t, std::less<>> access;
    const auto access_capacity = static_cast<double>(config_.defaults().link_capacity);
    for (const auto& [name, h] : topo.hosts()) {
        access[name] = report.links.size();
        report.links.push_back({name + "->" + to_string(h.attach), access_capacity, 0.0});
        report.links.push_back({to_string(h.attach) + "->" + name, access_capacity, 0.0});
        net.capacity.push_back(access_capacity);
        net.capacity.push_back(access_capacity);
    }

    std::vector<FlowId> ids;
    for (const auto& [id, flow] : flows_) {
        if (flow.state != FlowState::Admitted)
            continue;
        std::vector<std::size_t> links{access.at(flow.request.src_host)};
        for (std::size_t i = 0; i + 1 < flow.path.hops.size(); ++i) {
            const Hop& h = flow.path.hops[i];
            const std::size_t l = *topo.link_at(h.switch_id, h.out_port);
            const PortRef& a = topo.links()[l].a;
            const bool forward = a.device == h.switch_id && a.port == h.out_port;
            links.push_back(2 * l + (forward ? 0 : 1));
        }
        links.push_back(access.at(flow.request.dst_host) + 1);
        std::sort(links.begin(), links.end());
        links.erase(std::unique(links.begin(), links.end()), links.end());

        auto cap = static_cast<double>(flow.request.demand);
        for (const auto& [sw, st] : switches_) {
            for (const auto& e : st.table()) {
                if (e.flow == id && e.rule.meter)
                    cap = std::min(cap, static_cast<double>(e.rule.meter->rate));
            }
        }
        ids.push_back(id);
        report.flows[id] = FlowRate{0.0, cap, links};
        net.flows.push_back(FluidFlow{std::move(links), cap});
    }

    const std::vector<double> rates = max_min_rates(net);
    for (std::size_t f = 0; f < ids.size(); ++f) {
        FlowRate& fr = report.flows[ids[f]];
        fr.rate = rates[f];
        for (std::size_t l : fr.links)
            report.links[l].allocated += rates[f];
    }
    return report;
}

/* scripts */

namespace {

[[noreturn]] void script_error(std::size_t step, const std::string& what)
{
    throw FormatError("script step " + std::to_string(step) + ": " + what);
}

template <typename T>
T field(const json& obj, const char* key, std::size_t step)
{
    auto it = obj.find(key);
    if (it == obj.end())
        script_error(step, std::string("missing '") + key + "'");
    // nlohmann converts -1 to a huge unsigned value; reject it here.
    if constexpr (std::is_unsigned_v<T>) {
        if (!it->is_number_unsigned())
            script_error(step, std::string("'") + key + "' must be a non-negative integer");
    }
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        script_error(step, std::string("bad value for '") + key + "'");
    }
}

FlowStep parse_flow_step(const json& s, std::size_t i, const ApplicationRegistry& registry)
{
    FlowStep step;
    FlowRequest& req = step.request;
    req.src_host = field<std::string>(s, "src", i);
    req.dst_host = field<std::string>(s, "dst", i);
    if (s.contains("app")) {
        const auto app = field<std::string>(s, "app", i);
        const ApplicationEntry* e = registry.find(app);
        if (e == nullptr)
            script_error(i, "unknown application '" + app + "'");
        req.transport = e->transport;
        req.dst_port = e->dst_port;
    } else {
        const auto t = to_upper(field<std::string>(s, "transport", i));
        if (t != "TCP" && t != "UDP")
            script_error(i, "transport must be tcp or udp");
        req.transport = t == "TCP" ? Transport::TCP : Transport::UDP;
        const auto port = field<std::uint64_t>(s, "dst_port", i);
        if (port == 0 || port > 65535)
            script_error(i, "dst_port out of range");
        req.dst_port = static_cast<std::uint16_t>(port);
    }
    if (s.contains("src_port")) {
        const auto port = field<std::uint64_t>(s, "src_port", i);
        if (port == 0 || port > 65535)
            script_error(i, "src_port out of range");
        req.src_port = static_cast<std::uint16_t>(port);
    }
    const double mbps = s.contains("demand_mbps") ? field<double>(s, "demand_mbps", i) : 10000.0;
    if (!(mbps > 0.0) || mbps > 1e9)
        script_error(i, "demand_mbps must be positive");
    req.demand = static_cast<BitsPerSecond>(mbps * static_cast<double>(kMbps) + 0.5);
    if (s.contains("count")) {
        step.count = field<std::size_t>(s, "count", i);
        if (step.count == 0)
            script_error(i, "count must be positive");
        if (req.src_port && *req.src_port + step.count - 1 > 65535)
            script_error(i, "src_port range exceeds 65535");
    }
    return step;
}

} // namespace

std::vector<ScriptStep> parse_script(std::string_view json_text, const ApplicationRegistry& registry)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("script is not valid JSON: ") + e.what());
    }
    if (!doc.is_array())
        throw FormatError("script must be a JSON array of steps");

    std::vector<ScriptStep> steps;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& s = doc[i];
        if (!s.is_object())
            script_error(i, "not an object");
        ScriptStep step;
        step.at = field<std::uint64_t>(s, "at", i);
        const auto op = field<std::string>(s, "op", i);
        if (op == "flow") {
            step.action = parse_flow_step(s, i, registry);
        } else if (op == "add_policy") {
            Policy p;
            try {
                p = parse_policy(field<std::string>(s, "policy", i), registry);
            } catch (const Error& e) {
                script_error(i, e.what());
            }
            if (s.contains("id"))
                p.id = PolicyId{field<std::uint64_t>(s, "id", i)};
            step.action = AddPolicyStep{std::move(p)};
        } else if (op == "remove_policy") {
            step.action = RemovePolicyStep{PolicyId{field<std::uint64_t>(s, "id", i)}};
        } else {
            script_error(i, "unknown op '" + op + "'");
        }
        steps.push_back(std::move(step));
    }
    return steps;
}

std::vector<ScriptStep> load_script(const std::filesystem::path& path,
                                    const ApplicationRegistry& registry)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open script " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_script(buf.str(), registry);
}

ScenarioResult run_scenario(const NetworkConfig& config, const PolicyStore& policies,
                            std::span<const ScriptStep> script, InstallMode mode,
                            const ApplicationRegistry& registry, SimOptions options)
{
    Simulator sim(config, policies, registry, options);

    std::vector<const ScriptStep*> order;
    for (const auto& s : script)
        order.push_back(&s);
    std::stable_sort(order.begin(), order.end(),
                     [](const ScriptStep* a, const ScriptStep* b) { return a->at < b->at; });

    for (const ScriptStep* s : order) {
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, FlowStep>) {
                    for (std::size_t k = 0; k < a.count; ++k) {
                        FlowRequest req = a.request;
                        if (req.src_port)
                            req.src_port = static_cast<std::uint16_t>(*req.src_port + k);
                        sim.inject_flow(req, mode);
                    }
                } else if constexpr (std::is_same_v<T, AddPolicyStep>) {
                    sim.apply_policy_change({PolicyChange::Add{a.policy}});
                } else {
                    sim.apply_policy_change({PolicyChange::Remove{a.id}});
                }
            },
            s->action);
    }

    ScenarioResult result;
    result.log = sim.log();
    result.throughput = sim.solve_throughput();
    for (const auto& [id, st] : sim.switches())
        result.tables[id] = st.table();
    return result;
}

} // namespace osdf
