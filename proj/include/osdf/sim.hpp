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
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "osdf/compiler.hpp"
#include "osdf/network.hpp"
#include "osdf/policy.hpp"
#include "osdf/policy_store.hpp"
#include "osdf/throughput.hpp"

namespace osdf {

enum class InstallMode {
    // Controller installs the whole path on the first packet-in.
    OsdfPreinstall,
    // Controller installs only the asking switch's rule; every hop misses once.
    ReactiveBaseline,
};

std::string_view to_string(InstallMode m);

struct FlowRequest {
    std::string src_host;
    std::string dst_host;
    Transport transport = Transport::TCP;
    std::uint16_t dst_port = 0;
    std::optional<std::uint16_t> src_port;   // simulator picks one if unset
    BitsPerSecond demand = 0;
};

/// Request for a registered application; demand defaults to 10 Gbps.
FlowRequest make_request(const ApplicationRegistry& registry, std::string_view application,
                         std::string src_host, std::string dst_host,
                         BitsPerSecond demand = 10 * kGbps,
                         std::optional<std::uint16_t> src_port = {});

enum class DropReason { NoPolicy, Alert, NoPath, TableOverflow };

std::string_view to_string(DropReason r);

namespace event {

struct PacketIn {
    std::string switch_id;
    FlowId flow;
};
struct RuleInstall {
    std::string switch_id;
    FlowId flow;
    FlowRule rule;
    std::optional<FlowRule> reverse;
};
struct RuleRemove {
    std::string switch_id;
    FlowId flow;
    std::size_t entries;
};
struct AlertLogged {
    FlowId flow;
    PolicyId policy;
};
struct FlowAdmitted {
    FlowId flow;
    PolicyId policy;
    std::vector<std::string> path;
};
struct FlowDropped {
    FlowId flow;
    DropReason reason;
};
struct FlowRerouted {
    FlowId flow;
    PolicyId from;
    PolicyId to;
    std::vector<std::string> path;
};
struct PolicyAdded {
    PolicyId policy;
};
struct PolicyRemoved {
    PolicyId policy;
};

} // namespace event

using EventBody = std::variant<event::PacketIn, event::RuleInstall, event::RuleRemove,
                               event::AlertLogged, event::FlowAdmitted, event::FlowDropped,
                               event::FlowRerouted, event::PolicyAdded, event::PolicyRemoved>;

struct SimEvent {
    std::uint64_t seq = 0;   // logical time
    EventBody body;
};

struct EventCounts {
    std::uint64_t packet_in = 0;
    std::uint64_t rule_install = 0;
    std::uint64_t rule_remove = 0;
    std::uint64_t alert_logged = 0;
    std::uint64_t admitted = 0;
    std::uint64_t dropped = 0;
    std::uint64_t rerouted = 0;

    bool operator==(const EventCounts&) const = default;
};

EventCounts count_events(std::span<const SimEvent> events);

/// Append-only, totally ordered event log.
class SimLog {
public:
    const SimEvent& append(EventBody body);

    const std::vector<SimEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }
    EventCounts counts() const { return count_events(events_); }

    /// One JSON object per line, LF-terminated.
    std::string to_jsonl() const;

private:
    std::vector<SimEvent> events_;
};

std::string event_to_json(const SimEvent& e);

struct TableEntry {
    FlowRule rule;
    FlowId flow = 0;
    std::uint64_t seq = 0;   // installation order
};

/// Flow table of one switch, kept sorted by (priority desc, install order).
class SwitchState {
public:
    SwitchState(std::string id, std::size_t capacity);

    const std::string& id() const { return id_; }
    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return table_.size(); }
    std::size_t free_entries() const { return capacity_ - table_.size(); }
    const std::vector<TableEntry>& table() const { return table_; }

    /// Highest-priority matching entry, earliest-installed among equals.
    const TableEntry* lookup(const MatchFields& packet) const;

    /// Throws std::length_error when the table is full.
    void install(FlowRule rule, FlowId flow, std::uint64_t seq);
    std::size_t remove_flow(FlowId flow);

private:
    std::string id_;
    std::size_t capacity_;
    std::vector<TableEntry> table_;
};

enum class FlowState { Admitted, Blocked, Dropped };

struct FlowRecord {
    FlowId id = 0;
    FlowRequest request;       // src_port always set once injected
    FlowState state = FlowState::Dropped;
    std::optional<PolicyId> policy;
    Path path;                 // walked path for admitted flows
};

struct PolicyChange {
    struct Add {
        Policy policy;
    };
    struct Remove {
        PolicyId id;
    };
    std::variant<Add, Remove> change;
};

struct SimOptions {
    // Overrides the config's table capacity when set.
    std::optional<std::size_t> table_capacity;
};

/// Flow-level simulation of OSDF's packet-in handling over a static
/// topology. Single-threaded; may be moved between threads.
class Simulator {
public:
    Simulator(NetworkConfig config, PolicyStore policies,
              ApplicationRegistry registry = ApplicationRegistry::builtin(),
              SimOptions options = {});

    /// Delivers the first packet of a new flow. Returns the events it caused.
    /// Throws NotFound for unknown hosts, ValidationError for zero demand.
    std::vector<SimEvent> inject_flow(const FlowRequest& req, InstallMode mode);

    /// Adds or removes a policy, then recompiles every installed flow whose
    /// winning policy changed. Throws NotFound / DuplicateId from the store.
    std::vector<SimEvent> apply_policy_change(const PolicyChange& change);

    ThroughputReport solve_throughput() const;

    /// Highest-priority applicable policy, lowest id on ties.
    std::optional<Policy> select_policy(const FlowRequest& req) const;

    const SimLog& log() const { return log_; }
    const PolicyStore& store() const { return store_; }
    const NetworkConfig& config() const { return config_; }
    const std::map<FlowId, FlowRecord>& flows() const { return flows_; }
    const SwitchState& switch_state(std::string_view id) const;
    const std::map<std::string, SwitchState, std::less<>>& switches() const { return switches_; }

private:
    MatchFields packet_fields(const FlowRequest& req) const;
    bool tables_fit(const std::vector<FlowRule>& rules, FlowId flow) const;
    void install(const FlowRule& rule, const std::optional<Hop>& hop, FlowId flow);
    void remove_rules(FlowId flow);
    // Follows the first packet from the ingress switch until it is
    // delivered or dropped, calling the controller on every miss.
    void walk(FlowRecord& flow, InstallMode mode);
    // Controller reaction to an unmatched packet at sw:in_port. Returns false
    // if the flow was dropped.
    bool handle_packet_in(FlowRecord& flow, const std::string& sw, std::uint32_t in_port,
                          InstallMode mode);
    // Proactive recompile after a policy change.
    void reinstall(FlowRecord& flow, const std::optional<Policy>& winner);
    void drop(FlowRecord& flow, DropReason reason);
    bool port_in_use(const FlowRequest& req) const;
    std::vector<SimEvent> since(std::size_t mark) const;

    NetworkConfig config_;
    PolicyStore store_;
    ApplicationRegistry registry_;
    std::map<std::string, SwitchState, std::less<>> switches_;
    std::map<FlowId, FlowRecord> flows_;
    SimLog log_;
    FlowId next_flow_ = 1;
    std::uint64_t install_seq_ = 0;
    std::uint16_t next_ephemeral_ = 49152;
};

/* scenario scripts */

struct FlowStep {
    FlowRequest request;
    std::size_t count = 1;   // parallel connections; src_port increments
};
struct AddPolicyStep {
    Policy policy;
};
struct RemovePolicyStep {
    PolicyId id;
};

struct ScriptStep {
    std::uint64_t at = 0;
    std::variant<FlowStep, AddPolicyStep, RemovePolicyStep> action;
};

/// JSON array of {at, op: "flow"|"add_policy"|"remove_policy", ...}.
/// Throws FormatError.
std::vector<ScriptStep> parse_script(std::string_view json_text,
                                     const ApplicationRegistry& registry =
                                         ApplicationRegistry::builtin());
std::vector<ScriptStep> load_script(const std::filesystem::path& path,
                                    const ApplicationRegistry& registry =
                                        ApplicationRegistry::builtin());

struct ScenarioResult {
    SimLog log;
    ThroughputReport throughput;
    std::map<std::string, std::vector<TableEntry>> tables;   // final state
};

/// Runs the steps in `at` order (stable) against a fresh simulator.
ScenarioResult run_scenario(const NetworkConfig& config, const PolicyStore& policies,
                            std::span<const ScriptStep> script, InstallMode mode,
                            const ApplicationRegistry& registry = ApplicationRegistry::builtin(),
                            SimOptions options = {});

} // namespace osdf
