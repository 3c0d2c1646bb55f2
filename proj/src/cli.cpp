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

#include "osdf/cli.hpp"

#include <charconv>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "osdf/conflict.hpp"
#include "osdf/error.hpp"
#include "osdf/policy_store.hpp"
#include "osdf/sim.hpp"

namespace osdf {

namespace {

using nlohmann::json;

struct Options {
    std::string store;
    std::string config;
    std::string script;
    std::string mode = "osdf";
    bool json = false;
    std::string statement;
    std::string id;
};

PolicyId parse_id(const std::string& text)
{
    std::string_view digits = text;
    if (!digits.empty() && (digits.front() == 'P' || digits.front() == 'p'))
        digits.remove_prefix(1);
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc{} || end != digits.data() + digits.size() || v == 0)
        throw ValidationError("invalid policy id '" + text + "'");
    return PolicyId{v};
}

std::string mbps(double bps)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << bps / 1e6;
    return s.str();
}

std::vector<InstallMode> modes_for(const std::string& m)
{
    if (m == "osdf")
        return {InstallMode::OsdfPreinstall};
    if (m == "reactive")
        return {InstallMode::ReactiveBaseline};
    return {InstallMode::OsdfPreinstall, InstallMode::ReactiveBaseline};
}

json counts_json(const EventCounts& c)
{
    return json{{"packet_in", c.packet_in},   {"rule_install", c.rule_install},
                {"rule_remove", c.rule_remove}, {"alert_logged", c.alert_logged},
                {"admitted", c.admitted},     {"dropped", c.dropped},
                {"rerouted", c.rerouted}};
}

/* verbs */

int policy_add(const Options& o, std::ostream& out)
{
    PolicyStore store;
    if (std::filesystem::exists(o.store))
        store = load(o.store);
    const PolicyId id = store.add(parse_policy(o.statement));
    save(store, o.store);
    if (o.json)
        out << json{{"id", id.value}, {"policy", render_policy(*store.get(id))}}.dump() << '\n';
    else
        out << to_string(id) << '\n';
    return 0;
}

int policy_list(const Options& o, std::ostream& out)
{
    const PolicyStore store = load(o.store);
    if (o.json) {
        json arr = json::array();
        for (const auto& p : store.list())
            arr.push_back({{"id", p.id.value}, {"policy", render_policy(p)}});
        out << arr.dump() << '\n';
        return 0;
    }
    for (const auto& p : store.list())
        out << to_string(p.id) << ' ' << render_policy(p) << '\n';
    return 0;
}

int policy_remove(const Options& o, std::ostream& out)
{
    PolicyStore store = load(o.store);
    const PolicyId id = parse_id(o.id);
    const Policy removed = store.remove(id);
    save(store, o.store);
    if (o.json)
        out << json{{"id", id.value}, {"policy", render_policy(removed)}}.dump() << '\n';
    else
        out << "removed " << to_string(id) << '\n';
    return 0;
}

int conflicts(const Options& o, std::ostream& out)
{
    const PolicyStore store = load(o.store);
    std::optional<NetworkConfig> config;
    if (!o.config.empty())
        config = load_config(o.config);
    const DetectionResult result = detect_all(store, config ? &*config : nullptr);
    if (o.json) {
        json arr = json::array();
        for (const auto& r : result.reports)
            arr.push_back({{"first", to_string(r.first)},
                           {"second", to_string(r.second)},
                           {"class", std::string(to_string(r.cls))},
                           {"resolution", render_resolution(r.resolution)},
                           {"lossy", is_lossy(r.resolution)}});
        out << json{{"pairs_evaluated", result.pairs_evaluated}, {"conflicts", arr}}.dump()
            << '\n';
        return 0;
    }
    for (const auto& r : result.reports)
        out << render_report(r) << '\n';
    if (result.reports.empty())
        out << "no conflicts\n";
    return 0;
}

int sim_run(const Options& o, std::ostream& out)
{
    const NetworkConfig config = load_config(o.config);
    const PolicyStore store = load(o.store);
    const std::vector<ScriptStep> script = load_script(o.script);

    json doc = json::object();
    std::vector<std::pair<InstallMode, ScenarioResult>> runs;
    for (InstallMode m : modes_for(o.mode))
        runs.emplace_back(m, run_scenario(config, store, script, m));

    if (o.json) {
        for (const auto& [m, r] : runs) {
            json flows = json::object();
            for (const auto& [id, fr] : r.throughput.flows)
                flows[std::to_string(id)] = {{"rate_bps", fr.rate}, {"cap_bps", fr.cap}};
            json log = json::array();
            for (const auto& e : r.log.events())
                log.push_back(json::parse(event_to_json(e)));
            doc[std::string(to_string(m))] = {
                {"counts", counts_json(r.log.counts())}, {"flows", flows}, {"log", log}};
        }
        out << doc.dump() << '\n';
        return 0;
    }

    out << std::left << std::setw(10) << "mode" << std::right << std::setw(10) << "packet_in"
        << std::setw(14) << "rule_install" << std::setw(10) << "admitted" << std::setw(9)
        << "dropped" << std::setw(8) << "alerts" << std::setw(10) << "rerouted" << '\n';
    for (const auto& [m, r] : runs) {
        const EventCounts c = r.log.counts();
        out << std::left << std::setw(10) << to_string(m) << std::right << std::setw(10)
            << c.packet_in << std::setw(14) << c.rule_install << std::setw(10) << c.admitted
            << std::setw(9) << c.dropped << std::setw(8) << c.alert_logged << std::setw(10)
            << c.rerouted << '\n';
    }
    // Rates do not depend on the install mode; print them once.
    const ThroughputReport& tp = runs.front().second.throughput;
    if (!tp.flows.empty()) {
        out << "\nflow  rate_mbps  cap_mbps\n";
        for (const auto& [id, fr] : tp.flows)
            out << std::left << std::setw(6) << id << std::right << std::setw(9)
                << mbps(fr.rate) << std::setw(10) << mbps(fr.cap) << '\n';
    }
    return 0;
}

int rules_dump(const Options& o, std::ostream& out)
{
    const NetworkConfig config = load_config(o.config);
    const PolicyStore store = load(o.store);
    const std::vector<ScriptStep> script = load_script(o.script);
    const ScenarioResult r = run_scenario(config, store, script, modes_for(o.mode).front());
    const std::size_t capacity = config.defaults().table_capacity;

    if (o.json) {
        json doc = json::object();
        for (const auto& [sw, table] : r.tables) {
            json rules = json::array();
            for (const auto& e : table)
                rules.push_back({{"flow", e.flow}, {"rule", render_rule(e.rule)}});
            doc[sw] = rules;
        }
        out << doc.dump() << '\n';
        return 0;
    }
    for (const auto& [sw, table] : r.tables) {
        if (table.empty())
            continue;
        out << sw << " (" << table.size() << "/" << capacity << ")\n";
        for (const auto& e : table)
            out << "  flow " << e.flow << ": " << render_rule(e.rule) << '\n';
    }
    return 0;
}

// "osdf policy add ..." is accepted as an alias for "osdf policy-add ...".
std::vector<std::string> fold_policy_verb(std::vector<std::string> args)
{
    if (args.size() >= 3 && args[1] == "policy" &&
        (args[2] == "add" || args[2] == "list" || args[2] == "remove")) {
        args[1] = "policy-" + args[2];
        args.erase(args.begin() + 2);
    }
    return args;
}

} // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    const std::vector<std::string> args = fold_policy_verb(raw_args);

    CLI::App app{"OSDF intent-based policy engine and flow simulator", "osdf"};
    app.require_subcommand(1);
    Options o;

    auto* add = app.add_subcommand("policy-add", "Parse a policy statement and store it");
    add->add_option("statement", o.statement, "Policy statement")->required();
    add->add_option("--store", o.store, "Policy store file")->required();
    add->add_flag("--json", o.json, "Machine-readable output");

    auto* list = app.add_subcommand("policy-list", "List stored policies");
    list->add_option("--store", o.store, "Policy store file")->required();
    list->add_flag("--json", o.json, "Machine-readable output");

    auto* remove = app.add_subcommand("policy-remove", "Delete a stored policy");
    remove->add_option("id", o.id, "Policy id (P3 or 3)")->required();
    remove->add_option("--store", o.store, "Policy store file")->required();
    remove->add_flag("--json", o.json, "Machine-readable output");

    auto* conf = app.add_subcommand("conflicts", "Report pairwise policy conflicts");
    conf->add_option("--store", o.store, "Policy store file")->required();
    conf->add_option("--config", o.config, "Network config; checks host names when given");
    conf->add_flag("--json", o.json, "Machine-readable output");

    const auto mode_check = CLI::IsMember({"osdf", "reactive", "both"});
    auto* sim = app.add_subcommand("sim-run", "Run a flow script and report event counts");
    sim->add_option("--config", o.config, "Network config")->required();
    sim->add_option("--store", o.store, "Policy store file")->required();
    sim->add_option("--script", o.script, "Flow script")->required();
    sim->add_option("--mode", o.mode, "osdf, reactive or both")->check(mode_check);
    sim->add_flag("--json", o.json, "Machine-readable output");

    auto* dump = app.add_subcommand("rules-dump", "Run a flow script and print final flow tables");
    dump->add_option("--config", o.config, "Network config")->required();
    dump->add_option("--store", o.store, "Policy store file")->required();
    dump->add_option("--script", o.script, "Flow script")->required();
    dump->add_option("--mode", o.mode, "osdf or reactive")->check(mode_check);
    dump->add_flag("--json", o.json, "Machine-readable output");

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    if (dump->parsed() && o.mode == "both") {
        err << "osdf: rules-dump takes --mode osdf or --mode reactive\n";
        return 1;
    }

    try {
        if (add->parsed())
            return policy_add(o, out);
        if (list->parsed())
            return policy_list(o, out);
        if (remove->parsed())
            return policy_remove(o, out);
        if (conf->parsed())
            return conflicts(o, out);
        if (sim->parsed())
            return sim_run(o, out);
        return rules_dump(o, out);
    } catch (const Error& e) {
        err << "osdf: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "osdf: internal error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace osdf
