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

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "generators.hpp"
#include "network_oracles.hpp"
#include "osdf/error.hpp"
#include "osdf/sim.hpp"

namespace osdf {
namespace {

using testgen::fixture;
using testgen::fixture_config;
using testgen::store_of;

const ApplicationRegistry& apps()
{
    return ApplicationRegistry::builtin();
}

template <typename T>
std::vector<T> events_of(std::span<const SimEvent> events)
{
    std::vector<T> out;
    for (const auto& e : events)
        if (const auto* b = std::get_if<T>(&e.body))
            out.push_back(*b);
    return out;
}

template <typename T>
bool is(const SimEvent& e)
{
    return std::holds_alternative<T>(e.body);
}

/* switch tables */

FlowRule rule_with(int priority, std::uint16_t dst_port)
{
    FlowRule r;
    r.switch_id = "S1";
    r.match.src_address = "a";
    r.match.dst_address = "b";
    r.match.dst_port = dst_port;
    r.priority = priority;
    r.action = ForwardToPort{1};
    return r;
}

TEST(SwitchState, PriorityThenInstallOrder)
{
    SwitchState s("S1", 3);
    s.install(rule_with(10, 80), 1, 1);
    s.install(rule_with(20, 81), 2, 2);
    s.install(rule_with(10, 80), 3, 3);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s.table()[0].flow, 2u);
    EXPECT_EQ(s.table()[1].flow, 1u);
    EXPECT_EQ(s.table()[2].flow, 3u);
    EXPECT_EQ(s.free_entries(), 0u);
    EXPECT_THROW(s.install(rule_with(1, 1), 4, 4), std::length_error);

    MatchFields pkt = rule_with(0, 80).match;
    ASSERT_NE(s.lookup(pkt), nullptr);
    EXPECT_EQ(s.lookup(pkt)->flow, 1u);   // earliest among equal priority
    pkt.dst_port = 9;
    EXPECT_EQ(s.lookup(pkt), nullptr);

    EXPECT_EQ(s.remove_flow(1), 1u);
    EXPECT_EQ(s.remove_flow(1), 0u);
    pkt.dst_port = 80;
    EXPECT_EQ(s.lookup(pkt)->flow, 3u);
}

/* packet-in handling */

TEST(Simulator, LinearPreinstallCounts)
{
    Simulator sim(fixture_config("linear40.json"), store_of({"route WEB in D"}));
    const auto ev = sim.inject_flow(make_request(apps(), "WEB", "H1", "H40"), InstallMode::OsdfPreinstall);
    const EventCounts c = count_events(ev);
    EXPECT_EQ(c.packet_in, 1u);
    EXPECT_EQ(c.rule_install, 40u);
    EXPECT_EQ(c.admitted, 1u);
    EXPECT_TRUE(is<event::PacketIn>(ev.front()));
    EXPECT_TRUE(is<event::FlowAdmitted>(ev.back()));
    for (const auto& [id, st] : sim.switches())
        EXPECT_EQ(st.size(), 2u) << id;   // forward + return entry
}

TEST(Simulator, LinearReactiveCounts)
{
    Simulator sim(fixture_config("linear40.json"), store_of({"route WEB in D"}));
    const auto ev = sim.inject_flow(make_request(apps(), "WEB", "H1", "H40"), InstallMode::ReactiveBaseline);
    const EventCounts c = count_events(ev);
    EXPECT_EQ(c.packet_in, 40u);
    EXPECT_EQ(c.rule_install, 40u);
    EXPECT_EQ(c.admitted, 1u);
    // Misses and installs alternate hop by hop.
    for (std::size_t i = 0; i + 1 < ev.size(); i += 2) {
        ASSERT_TRUE(is<event::PacketIn>(ev[i]));
        ASSERT_TRUE(is<event::RuleInstall>(ev[i + 1]));
        EXPECT_EQ(std::get<event::PacketIn>(ev[i].body).switch_id, "S" + std::to_string(i / 2 + 1));
    }
}

TEST(Simulator, NoPolicyDrops)
{
    Simulator sim(fixture_config("leaf_spine.json"),
                  store_of({"route WEB in A between (H1,H3),(H1,H5),(H3,H5)",
                            "route VIDEO in A between (H2,H4),(H2,H6),(H4,H6)"}));
    const auto ev = sim.inject_flow(make_request(apps(), "WEB", "H2", "H4"), InstallMode::OsdfPreinstall);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_TRUE(is<event::PacketIn>(ev[0]));
    EXPECT_EQ(std::get<event::FlowDropped>(ev[1].body).reason, DropReason::NoPolicy);
    EXPECT_EQ(sim.flows().at(1).state, FlowState::Dropped);
}

TEST(Simulator, AlertLogsAndDropsAtIngress)
{
    Simulator sim(fixture_config("leaf_spine.json"),
                  store_of({"route WEB in A", "alert WEB in A priority 50 between (H1,H3)"}));
    const auto ev = sim.inject_flow(make_request(apps(), "WEB", "H1", "H3"), InstallMode::ReactiveBaseline);
    ASSERT_EQ(ev.size(), 4u);
    EXPECT_TRUE(is<event::PacketIn>(ev[0]));
    const auto& install = std::get<event::RuleInstall>(ev[1].body);
    EXPECT_EQ(install.switch_id, "L1");
    EXPECT_TRUE(std::holds_alternative<LogAndDrop>(install.rule.action));
    EXPECT_FALSE(install.reverse.has_value());
    EXPECT_EQ(std::get<event::AlertLogged>(ev[2].body).policy, PolicyId{2});
    EXPECT_EQ(std::get<event::FlowDropped>(ev[3].body).reason, DropReason::Alert);
    EXPECT_EQ(sim.switch_state("L1").size(), 1u);
    EXPECT_EQ(sim.flows().at(1).state, FlowState::Blocked);

    // The unaffected pair still routes.
    const auto ok = sim.inject_flow(make_request(apps(), "WEB", "H1", "H5"), InstallMode::OsdfPreinstall);
    EXPECT_EQ(count_events(ok).admitted, 1u);
}

TEST(Simulator, EphemeralPortsAndDuplicates)
{
    Simulator sim(fixture_config("linear40.json"), store_of({"route WEB in D"}));
    sim.inject_flow(make_request(apps(), "WEB", "H1", "H2"), InstallMode::OsdfPreinstall);
    sim.inject_flow(make_request(apps(), "WEB", "H1", "H2"), InstallMode::OsdfPreinstall);
    EXPECT_EQ(sim.flows().at(1).request.src_port, 49152);
    EXPECT_EQ(sim.flows().at(2).request.src_port, 49153);

    EXPECT_THROW(sim.inject_flow(make_request(apps(), "WEB", "H1", "H2", kGbps, 49152),
                                 InstallMode::OsdfPreinstall),
                 ValidationError);
    EXPECT_THROW(sim.inject_flow(make_request(apps(), "WEB", "H1", "H99"), InstallMode::OsdfPreinstall),
                 NotFound);
    EXPECT_THROW(sim.inject_flow(make_request(apps(), "WEB", "H1", "H2", 0), InstallMode::OsdfPreinstall),
                 ValidationError);
    EXPECT_THROW(make_request(apps(), "FTP", "H1", "H2"), UnknownApplication);
}

TEST(Simulator, TableOverflowIsAtomic)
{
    for (InstallMode mode : {InstallMode::OsdfPreinstall, InstallMode::ReactiveBaseline}) {
        Simulator sim(fixture_config("linear40.json"), store_of({"route WEB in D"}),
                      apps(), SimOptions{3});
        sim.inject_flow(make_request(apps(), "WEB", "H1", "H3"), mode);
        // S1..S3 hold 2 of 3 entries; a second route through them cannot fit.
        const auto ev = sim.inject_flow(make_request(apps(), "WEB", "H2", "H5"), mode);
        ASSERT_EQ(ev.size(), 2u) << to_string(mode);
        EXPECT_TRUE(is<event::PacketIn>(ev[0]));
        EXPECT_EQ(std::get<event::FlowDropped>(ev[1].body).reason, DropReason::TableOverflow);
        for (const auto& [id, st] : sim.switches())
            for (const auto& e : st.table())
                EXPECT_EQ(e.flow, 1u);
        EXPECT_EQ(sim.switch_state("S4").size(), 0u);
    }
}

TEST(Simulator, NoPathDrop)
{
    Simulator sim(fixture_config("site_c.json"), store_of({"route WEB in C via S5:9"}));
    const auto ev = sim.inject_flow(make_request(apps(), "WEB", "H1", "H2"), InstallMode::OsdfPreinstall);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(std::get<event::FlowDropped>(ev[1].body).reason, DropReason::NoPath);
}

TEST(Simulator, InterSiteRespectsDirection)
{
    Simulator sim(fixture_config("enterprise.json"), store_of({"route WEB from IT to Sales"}));
    const auto fwd = sim.inject_flow(make_request(apps(), "WEB", "IT-H1", "Sales-H1"),
                                     InstallMode::OsdfPreinstall);
    EXPECT_EQ(count_events(fwd).admitted, 1u);
    const auto back = sim.inject_flow(make_request(apps(), "WEB", "Sales-H1", "IT-H1"),
                                      InstallMode::OsdfPreinstall);
    EXPECT_EQ(count_events(back).dropped, 1u);
}

/* policy changes */

TEST(PolicyChange, FailoverAndBack)
{
    Simulator sim(fixture_config("site_c.json"),
                  store_of({"route WEB in C priority 100 via S3:2", "route WEB in C priority 50 via S6:4"}));
    sim.inject_flow(make_request(apps(), "WEB", "H1", "H2"), InstallMode::OsdfPreinstall);
    EXPECT_EQ(sim.flows().at(1).path.switch_ids(),
              (std::vector<std::string>{"S1", "S2", "S3", "S7", "S10"}));

    const auto down = sim.apply_policy_change({PolicyChange::Remove{PolicyId{1}}});
    EXPECT_TRUE(is<event::PolicyRemoved>(down.front()));
    const EventCounts c = count_events(down);
    EXPECT_EQ(c.rule_remove, 5u);
    EXPECT_EQ(c.rule_install, 5u);
    EXPECT_EQ(c.packet_in, 0u);
    const auto rr = events_of<event::FlowRerouted>(down);
    ASSERT_EQ(rr.size(), 1u);
    EXPECT_EQ(rr[0].from, PolicyId{1});
    EXPECT_EQ(rr[0].to, PolicyId{2});
    EXPECT_EQ(rr[0].path, (std::vector<std::string>{"S1", "S4", "S6", "S9", "S10"}));
    EXPECT_EQ(sim.flows().at(1).path.hops[2], (Hop{"S6", 1, 4}));
    EXPECT_EQ(sim.switch_state("S3").size(), 0u);

    Policy primary = parse_policy("route WEB in C priority 100 via S3:2");
    primary.id = PolicyId{1};
    const auto up = sim.apply_policy_change({PolicyChange::Add{primary}});
    EXPECT_TRUE(is<event::PolicyAdded>(up.front()));
    EXPECT_EQ(sim.flows().at(1).path.switch_ids(),
              (std::vector<std::string>{"S1", "S2", "S3", "S7", "S10"}));
    EXPECT_EQ(sim.switch_state("S6").size(), 0u);
}

TEST(PolicyChange, UnrelatedChangesTouchNoRules)
{
    Simulator sim(fixture_config("site_c.json"), store_of({"route WEB in C", "route VIDEO in C"}));
    sim.inject_flow(make_request(apps(), "WEB", "H1", "H2"), InstallMode::OsdfPreinstall);
    const auto ev = sim.apply_policy_change({PolicyChange::Remove{PolicyId{2}}});
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_TRUE(is<event::PolicyRemoved>(ev[0]));
    const auto add = sim.apply_policy_change({PolicyChange::Add{parse_policy("alert VOICE in C")}});
    ASSERT_EQ(add.size(), 1u);
    EXPECT_EQ(std::get<event::PolicyAdded>(add[0].body).policy, PolicyId{3});
    EXPECT_THROW(sim.apply_policy_change({PolicyChange::Remove{PolicyId{42}}}), NotFound);
}

TEST(PolicyChange, AlertBlocksThenReleases)
{
    Simulator sim(fixture_config("site_c.json"), store_of({"route WEB in C"}));
    sim.inject_flow(make_request(apps(), "WEB", "H1", "H2"), InstallMode::OsdfPreinstall);
    const auto block = sim.apply_policy_change({PolicyChange::Add{parse_policy("alert WEB in C priority 90")}});
    EXPECT_EQ(count_events(block).alert_logged, 1u);
    EXPECT_EQ(events_of<event::FlowDropped>(block).at(0).reason, DropReason::Alert);
    EXPECT_EQ(sim.flows().at(1).state, FlowState::Blocked);
    EXPECT_EQ(sim.switch_state("S1").size(), 1u);

    const auto release = sim.apply_policy_change({PolicyChange::Remove{PolicyId{2}}});
    EXPECT_EQ(count_events(release).rerouted, 1u);
    EXPECT_EQ(sim.flows().at(1).state, FlowState::Admitted);

    const auto gone = sim.apply_policy_change({PolicyChange::Remove{PolicyId{1}}});
    EXPECT_EQ(events_of<event::FlowDropped>(gone).at(0).reason, DropReason::NoPolicy);
    for (const auto& [id, st] : sim.switches())
        EXPECT_EQ(st.size(), 0u);
}

/* throughput */

TEST(Throughput, QosFlowsGetTheirMeters)
{
    const auto script = load_script(fixture("scenarios/qos.json"));
    const auto r = run_scenario(fixture_config("enterprise.json"), load(fixture("scenarios/qos.store")),
                                script, InstallMode::OsdfPreinstall);
    ASSERT_EQ(r.throughput.flows.size(), 6u);
    for (FlowId f = 1; f <= 4; ++f)
        EXPECT_EQ(r.throughput.rate(f), 200e6);
    for (FlowId f = 5; f <= 6; ++f)
        EXPECT_EQ(r.throughput.rate(f), 500e6);
}

TEST(Throughput, DroppedAndBlockedFlowsCarryNothing)
{
    Simulator sim(fixture_config("leaf_spine.json"),
                  store_of({"route WEB in A between (H1,H3)", "alert VIDEO in A"}));
    sim.inject_flow(make_request(apps(), "WEB", "H1", "H3"), InstallMode::OsdfPreinstall);
    sim.inject_flow(make_request(apps(), "VIDEO", "H1", "H3"), InstallMode::OsdfPreinstall);
    sim.inject_flow(make_request(apps(), "WEB", "H2", "H4"), InstallMode::OsdfPreinstall);
    const ThroughputReport r = sim.solve_throughput();
    ASSERT_EQ(r.flows.size(), 1u);
    EXPECT_EQ(r.rate(1), 1e9);
}

/* scripts */

TEST(Script, ParsesStepsAndDefaults)
{
    const auto steps = parse_script(R"([
        {"at": 3, "op": "flow", "src": "H1", "dst": "H2", "app": "web"},
        {"at": 1, "op": "flow", "src": "H1", "dst": "H2", "transport": "udp", "dst_port": 53,
         "src_port": 1000, "demand_mbps": 2.5, "count": 3},
        {"at": 2, "op": "add_policy", "policy": "route WEB in C", "id": 9},
        {"at": 4, "op": "remove_policy", "id": 9}
    ])");
    ASSERT_EQ(steps.size(), 4u);
    const auto& f0 = std::get<FlowStep>(steps[0].action);
    EXPECT_EQ(f0.request.dst_port, 80);
    EXPECT_EQ(f0.request.demand, 10 * kGbps);
    EXPECT_FALSE(f0.request.src_port.has_value());
    EXPECT_EQ(f0.count, 1u);
    const auto& f1 = std::get<FlowStep>(steps[1].action);
    EXPECT_EQ(f1.request.transport, Transport::UDP);
    EXPECT_EQ(f1.request.src_port, 1000);
    EXPECT_EQ(f1.request.demand, 2500 * kMbps / 1000);
    EXPECT_EQ(f1.count, 3u);
    EXPECT_EQ(std::get<AddPolicyStep>(steps[2].action).policy.id, PolicyId{9});
    EXPECT_EQ(std::get<RemovePolicyStep>(steps[3].action).id, PolicyId{9});
}

TEST(Script, MalformedScripts)
{
    for (const char* text : {
             "{}", "[1]", "[{\"op\": \"flow\"}]", "[{\"at\": 1, \"op\": \"jump\"}]",
             "[{\"at\": 1, \"op\": \"flow\", \"src\": \"H1\", \"dst\": \"H2\", \"app\": \"ftp\"}]",
             "[{\"at\": 1, \"op\": \"flow\", \"src\": \"H1\", \"dst\": \"H2\", \"app\": \"web\", \"count\": 0}]",
             "[{\"at\": 1, \"op\": \"flow\", \"src\": \"H1\", \"dst\": \"H2\", \"app\": \"web\", \"demand_mbps\": -1}]",
             "[{\"at\": 1, \"op\": \"flow\", \"src\": \"H1\", \"dst\": \"H2\", \"transport\": \"sctp\", \"dst_port\": 1}]",
             "[{\"at\": 1, \"op\": \"flow\", \"src\": \"H1\", \"dst\": \"H2\", \"app\": \"web\", \"src_port\": 70000}]",
             "[{\"at\": 1, \"op\": \"flow\", \"src\": \"H1\", \"dst\": \"H2\", \"app\": \"web\", \"src_port\": 65535, \"count\": 2}]",
             "[{\"at\": 1, \"op\": \"add_policy\", \"policy\": \"route WEB\"}]",
             "[{\"at\": -1, \"op\": \"remove_policy\", \"id\": 1}]",
             "not json"}) {
        EXPECT_THROW(parse_script(text), FormatError) << text;
    }
    EXPECT_THROW(load_script(fixture("scenarios/absent.json")), IoError);
}

TEST(Script, EmptyScriptEmptyLog)
{
    const auto r = run_scenario(fixture_config("leaf_spine.json"), store_of({"route WEB in A"}),
                                {}, InstallMode::OsdfPreinstall);
    EXPECT_TRUE(r.log.empty());
    EXPECT_EQ(r.log.to_jsonl(), "");
    EXPECT_TRUE(r.throughput.flows.empty());
}

TEST(Script, StepsRunInTimeOrder)
{
    const auto steps = parse_script(R"([
        {"at": 5, "op": "flow", "src": "H1", "dst": "H2", "app": "web"},
        {"at": 1, "op": "remove_policy", "id": 1},
        {"at": 5, "op": "flow", "src": "H1", "dst": "H2", "app": "video"}
    ])");
    const auto r = run_scenario(fixture_config("site_c.json"),
                                store_of({"route WEB in C", "route VIDEO in C"}), steps,
                                InstallMode::OsdfPreinstall);
    const auto& ev = r.log.events();
    EXPECT_TRUE(is<event::PolicyRemoved>(ev.front()));
    const auto dropped = events_of<event::FlowDropped>(ev);
    ASSERT_EQ(dropped.size(), 1u);
    EXPECT_EQ(dropped[0].flow, 1u);   // the WEB flow kept its place before VIDEO
    EXPECT_EQ(count_events(ev).admitted, 1u);
}

TEST(SimLog, JsonLines)
{
    const auto r = run_scenario(fixture_config("site_c.json"), store_of({"route WEB in C"}),
                                parse_script(R"([{"at": 1, "op": "flow", "src": "H1", "dst": "H2", "app": "web", "src_port": 40000}])"),
                                InstallMode::OsdfPreinstall);
    const std::string jl = r.log.to_jsonl();
    EXPECT_EQ(jl.substr(0, jl.find('\n')), R"({"event":"packet_in","flow":1,"seq":1,"switch":"S1"})");
    std::size_t lines = 0;
    std::size_t start = 0;
    while (start < jl.size()) {
        const std::size_t end = jl.find('\n', start);
        ASSERT_NE(end, std::string::npos);
        const auto j = nlohmann::json::parse(jl.substr(start, end - start));
        EXPECT_EQ(j["seq"].get<std::size_t>(), ++lines);
        start = end + 1;
    }
    EXPECT_EQ(lines, r.log.size());
    const auto& last = r.log.events().back();
    EXPECT_EQ(event_to_json(last),
              R"({"event":"flow_admitted","flow":1,"path":["S1","S2","S3","S7","S10"],"policy":"P1","seq":7})");
}

/* properties over random scenarios */

struct RandomScenario {
    NetworkConfig config;
    PolicyStore store;
    std::vector<ScriptStep> script;
};

RandomScenario random_scenario(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    testgen::TopologySpec spec;
    spec.switches = 4 + seed % 7;
    spec.extra_links = seed % 5;
    spec.hosts = 6;
    spec.regions = 1 + seed % 2;
    NetworkConfig config = testgen::random_network(rng, spec);

    testgen::Universe u;
    for (int i = 1; i <= 6; ++i)
        u.hosts.push_back("H" + std::to_string(i));
    for (std::size_t r = 1; r <= spec.regions; ++r)
        u.regions.push_back("R" + std::to_string(r));
    if (u.regions.size() == 1)
        u.regions.push_back("R9");   // inter-site policies that never apply
    u.applications = {"WEB", "VIDEO", "VOICE"};
    for (std::size_t s = 1; s <= spec.switches; ++s)
        u.devices.push_back("S" + std::to_string(s));
    u.priorities = {1, 10, 10, 50, 100};
    testgen::PolicyGen gen(seed * 7919 + 1, u);

    PolicyStore store;
    std::vector<PolicyId> live;
    for (int i = 0; i < 6; ++i)
        live.push_back(store.add(gen.policy()));

    std::vector<ScriptStep> script;
    std::uint64_t next_id = 100;
    for (std::uint64_t at = 0; at < 25; ++at) {
        const std::size_t roll = gen.index(10);
        if (roll < 7) {
            const HostPair hp = gen.pair();
            const bool flip = gen.chance(0.5);
            FlowStep f;
            f.request = make_request(apps(), u.applications[gen.index(3)], flip ? hp.second : hp.first,
                                     flip ? hp.first : hp.second,
                                     (1 + gen.index(2000)) * kMbps);
            f.count = 1 + gen.index(3);
            script.push_back({at, f});
        } else if (roll < 9 || live.empty()) {
            Policy p = gen.policy();
            p.id = PolicyId{next_id++};
            live.push_back(p.id);
            script.push_back({at, AddPolicyStep{p}});
        } else {
            const std::size_t k = gen.index(live.size());
            script.push_back({at, RemovePolicyStep{live[k]}});
            live.erase(live.begin() + static_cast<std::ptrdiff_t>(k));
        }
    }
    return {std::move(config), std::move(store), std::move(script)};
}

std::optional<ScenarioResult> try_run(const RandomScenario& s, InstallMode mode)
{
    return run_scenario(s.config, s.store, s.script, mode);
}

std::optional<PolicyId> expected_winner(const std::vector<Policy>& policies, const NetworkConfig& c,
                                        const FlowRequest& req)
{
    auto region_of_host = [&](const std::string& h) {
        const std::string& sw = c.topology().host(h).attach.device;
        for (const auto& r : c.regions())
            if (r.switches.contains(sw))
                return r.name;
        return std::string();
    };
    const std::string sr = region_of_host(req.src_host);
    const std::string dr = region_of_host(req.dst_host);
    std::optional<Policy> best;
    for (const auto& p : policies) {
        const ApplicationEntry* app = apps().find(p.profile.application);
        if (app->transport != req.transport || app->dst_port != req.dst_port)
            continue;
        const bool intra = p.op_class().scope == SiteScope::Intra;
        if (intra ? !(sr == dr && p.source_region == sr)
                  : !(sr != dr && p.source_region == sr && p.destination_region == dr))
            continue;
        bool covered = p.address_space.hosts.is_all();
        for (const auto& hp : p.address_space.hosts.pairs())
            covered = covered || (hp.first == req.src_host && hp.second == req.dst_host) ||
                      (hp.first == req.dst_host && hp.second == req.src_host);
        if (!covered)
            continue;
        if (!best || p.priority > best->priority || (p.priority == best->priority && p.id < best->id))
            best = p;
    }
    return best ? std::optional<PolicyId>(best->id) : std::nullopt;
}

TEST(SimProperties, ModeEquivalence)
{
    int ran = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const RandomScenario s = random_scenario(seed);
        const auto pre = try_run(s, InstallMode::OsdfPreinstall);
        const auto rea = try_run(s, InstallMode::ReactiveBaseline);
        ASSERT_EQ(pre.has_value(), rea.has_value());
        if (!pre)
            continue;
        ++ran;
        ASSERT_EQ(pre->tables.size(), rea->tables.size());
        for (const auto& [sw, table] : pre->tables) {
            const auto& other = rea->tables.at(sw);
            ASSERT_EQ(table.size(), other.size()) << "seed " << seed << " switch " << sw;
            for (std::size_t i = 0; i < table.size(); ++i) {
                ASSERT_EQ(table[i].rule, other[i].rule);
                ASSERT_EQ(table[i].flow, other[i].flow);
            }
        }
        const EventCounts a = pre->log.counts(), b = rea->log.counts();
        ASSERT_EQ(a.rule_install, b.rule_install);
        ASSERT_EQ(a.admitted, b.admitted);
        ASSERT_EQ(a.dropped, b.dropped);
        ASSERT_EQ(a.rerouted, b.rerouted);
        ASSERT_LE(a.packet_in, b.packet_in);
        for (const auto& [f, fr] : pre->throughput.flows)
            ASSERT_EQ(fr.rate, rea->throughput.rate(f));
    }
    EXPECT_EQ(ran, 150);
}

TEST(SimProperties, DeterministicLogs)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const RandomScenario s = random_scenario(seed);
        for (InstallMode m : {InstallMode::OsdfPreinstall, InstallMode::ReactiveBaseline}) {
            const auto a = try_run(s, m);
            const auto b = try_run(s, m);
            if (a)
                ASSERT_EQ(a->log.to_jsonl(), b->log.to_jsonl());
        }
    }
}

TEST(SimProperties, PolicyPrecedence)
{
    int admitted = 0;
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        const RandomScenario s = random_scenario(seed);
        Simulator sim(s.config, s.store);
        for (const auto& step : s.script) {
            const auto* f = std::get_if<FlowStep>(&step.action);
            if (f == nullptr)
                continue;
            sim.inject_flow(f->request, InstallMode::OsdfPreinstall);
            const FlowRecord& rec = sim.flows().rbegin()->second;
            const auto want = expected_winner(sim.store().list(), s.config, rec.request);
            if (rec.state == FlowState::Dropped) {
                const auto reason = events_of<event::FlowDropped>(sim.log().events()).back().reason;
                if (reason == DropReason::NoPolicy)
                    ASSERT_FALSE(want.has_value());
                else
                    ASSERT_TRUE(want.has_value());
                continue;
            }
            ASSERT_EQ(rec.policy, want) << "seed " << seed;
            admitted += rec.state == FlowState::Admitted;
        }
    }
    EXPECT_GT(admitted, 200);
}

TEST(SimProperties, ThroughputConservationAndMeters)
{
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        const RandomScenario s = random_scenario(seed);
        const auto r = try_run(s, InstallMode::OsdfPreinstall);
        if (!r)
            continue;
        const ThroughputReport& tp = r->throughput;
        FluidNetwork net;
        for (const auto& l : tp.links) {
            ASSERT_LE(l.allocated, l.capacity * (1 + 1e-9)) << l.name;
            net.capacity.push_back(l.capacity);
        }
        std::vector<double> rates;
        for (const auto& [f, fr] : tp.flows) {
            ASSERT_LE(fr.rate, fr.cap);
            net.flows.push_back({fr.links, fr.cap});
            rates.push_back(fr.rate);
            // Meter dominance: rate never exceeds any meter on the flow's rules.
            for (const auto& [sw, table] : r->tables)
                for (const auto& e : table)
                    if (e.flow == f && e.rule.meter)
                        ASSERT_LE(fr.rate, static_cast<double>(e.rule.meter->rate));
        }
        const auto violation = oracle::check_maxmin(net, rates, 1e-9);
        ASSERT_FALSE(violation.has_value()) << "seed " << seed << ": " << *violation;
        const auto want = oracle::bottleneck_maxmin(net);
        for (std::size_t i = 0; i < rates.size(); ++i)
            ASSERT_NEAR(rates[i], want[i], 1e-6 * std::max(1.0, want[i]));
    }
}

TEST(SimProperties, TablesNeverExceedCapacity)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const RandomScenario s = random_scenario(seed);
        for (std::size_t cap : {2u, 5u, 9u}) {
            const auto r = run_scenario(s.config, s.store, s.script, InstallMode::ReactiveBaseline,
                                        apps(), SimOptions{cap});
            for (const auto& [sw, table] : r.tables)
                ASSERT_LE(table.size(), cap);
        }
    }
}

} // namespace
} // namespace osdf
