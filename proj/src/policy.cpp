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

#include "osdf/policy.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <iterator>
#include <limits>

#include "osdf/error.hpp"

namespace osdf {

std::string to_string(PolicyId id)
{
    return "P" + std::to_string(id.value);
}

OperationClass classify(NetworkOperation op)
{
    switch (op) {
    case NetworkOperation::IntraSiteRoute:
    case NetworkOperation::IntraSiteRouteQoS:
        return {OperationKind::Route, SiteScope::Intra};
    case NetworkOperation::InterSiteRoute:
    case NetworkOperation::InterSiteRouteQoS:
        return {OperationKind::Route, SiteScope::Inter};
    case NetworkOperation::IntraSiteAlert:
        return {OperationKind::Alert, SiteScope::Intra};
    case NetworkOperation::InterSiteAlert:
        return {OperationKind::Alert, SiteScope::Inter};
    }
    return {OperationKind::Route, SiteScope::Intra};
}

bool is_qos(NetworkOperation op)
{
    return op == NetworkOperation::IntraSiteRouteQoS ||
           op == NetworkOperation::InterSiteRouteQoS;
}

std::string_view to_string(NetworkOperation op)
{
    switch (op) {
    case NetworkOperation::IntraSiteRoute:    return "Intra-Site-Route";
    case NetworkOperation::InterSiteRoute:    return "Inter-Site-Route";
    case NetworkOperation::IntraSiteAlert:    return "Intra-Site-Alert";
    case NetworkOperation::InterSiteAlert:    return "Inter-Site-Alert";
    case NetworkOperation::IntraSiteRouteQoS: return "Intra-Site-Route-QoS";
    case NetworkOperation::InterSiteRouteQoS: return "Inter-Site-Route-QoS";
    }
    return "?";
}

std::string_view to_string(Transport t)
{
    return t == Transport::TCP ? "tcp" : "udp";
}

std::string to_upper(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

/* ApplicationRegistry */

const ApplicationRegistry& ApplicationRegistry::builtin()
{
    static const ApplicationRegistry registry = [] {
        ApplicationRegistry r;
        r.register_application("WEB", {Transport::TCP, 80, TrafficType::BestEffort});
        r.register_application("VIDEO", {Transport::TCP, 5001, TrafficType::RealTime});
        r.register_application("VOICE", {Transport::UDP, 5060, TrafficType::RealTime});
        return r;
    }();
    return registry;
}

void ApplicationRegistry::register_application(std::string_view name, ApplicationEntry entry)
{
    if (name.empty())
        throw SemanticError("application name must not be empty");
    auto [it, inserted] = entries_.emplace(to_upper(name), entry);
    if (!inserted)
        throw SemanticError("application '" + it->first + "' is already registered");
}

const ApplicationEntry* ApplicationRegistry::find(std::string_view name) const
{
    auto it = entries_.find(to_upper(name));
    return it == entries_.end() ? nullptr : &it->second;
}

TrafficProfile ApplicationRegistry::profile(std::string_view name) const
{
    const ApplicationEntry* e = find(name);
    if (e == nullptr)
        throw UnknownApplication("unknown application '" + std::string(name) + "'");
    return {to_upper(name), e->transport, e->traffic_type};
}

/* HostPair / PairSet */

HostPair::HostPair(std::string a, std::string b)
    : first(std::move(a))
    , second(std::move(b))
{
    if (second < first)
        std::swap(first, second);
}

PairSet::PairSet(std::set<HostPair> pairs)
    : pairs_(std::move(pairs))
{ }

PairSet::PairSet(std::initializer_list<HostPair> pairs)
    : pairs_(pairs)
{ }

PairSet PairSet::all_hosts()
{
    PairSet s;
    s.all_ = true;
    return s;
}

bool PairSet::covers(const HostPair& p) const
{
    return all_ || pairs_.contains(p);
}

bool PairSet::subset_of(const PairSet& other) const
{
    if (other.all_)
        return true;
    if (all_)
        return false;
    return std::includes(other.pairs_.begin(), other.pairs_.end(),
                         pairs_.begin(), pairs_.end());
}

bool PairSet::intersects(const PairSet& other) const
{
    return !intersection(other).empty();
}

PairSet PairSet::intersection(const PairSet& other) const
{
    if (all_)
        return other;
    if (other.all_)
        return *this;
    std::set<HostPair> out;
    std::set_intersection(pairs_.begin(), pairs_.end(),
                          other.pairs_.begin(), other.pairs_.end(),
                          std::inserter(out, out.end()));
    return PairSet(std::move(out));
}

PairSet PairSet::union_with(const PairSet& other) const
{
    if (all_ || other.all_)
        return all_hosts();
    std::set<HostPair> out = pairs_;
    out.insert(other.pairs_.begin(), other.pairs_.end());
    return PairSet(std::move(out));
}

std::optional<PairSet> PairSet::minus(const PairSet& other) const
{
    if (other.all_)
        return PairSet();
    if (all_)
        return other.pairs_.empty() ? std::optional<PairSet>(*this) : std::nullopt;
    std::set<HostPair> out;
    std::set_difference(pairs_.begin(), pairs_.end(),
                        other.pairs_.begin(), other.pairs_.end(),
                        std::inserter(out, out.end()));
    return PairSet(std::move(out));
}

/* Policy */

std::optional<BitsPerSecond> Policy::rate_limit() const
{
    for (const auto& tc : traffic_conditions) {
        if (tc.kind == TrafficConditionKind::RateLimitPerFlow)
            return tc.rate;
    }
    return std::nullopt;
}

void validate(const Policy& p)
{
    if (p.priority < 1)
        throw SemanticError("priority must be >= 1, got " + std::to_string(p.priority));
    if (p.profile.application.empty())
        throw SemanticError("policy has no application");
    if (p.source_region.empty() || p.destination_region.empty())
        throw SemanticError("policy regions must be named");

    const SiteScope scope = classify(p.operation).scope;
    if (scope == SiteScope::Intra && p.source_region != p.destination_region)
        throw SemanticError("intra-site policy must have equal source and destination regions");
    if (scope == SiteScope::Inter && p.source_region == p.destination_region)
        throw SemanticError("inter-site policy needs two distinct regions, got '" +
                            p.source_region + "' twice");

    if (p.address_space.hosts.empty())
        throw SemanticError("address space must contain at least one host pair");
    for (const auto& w : p.address_space.waypoints) {
        if (w.device.empty())
            throw SemanticError("waypoint device must be named");
        if (w.egress_port && *w.egress_port == 0)
            throw SemanticError("waypoint port must be >= 1");
    }

    if (p.traffic_conditions.size() > 1)
        throw SemanticError("at most one rate limit per policy");
    for (const auto& tc : p.traffic_conditions) {
        if (tc.rate == 0)
            throw SemanticError("rate limit must be positive");
        if (tc.rate % kMbps != 0)
            throw SemanticError("rate limit must be a whole number of Mbps");
    }

    const bool has_rate = !p.traffic_conditions.empty();
    if (is_qos(p.operation) != has_rate)
        throw SemanticError(is_qos(p.operation)
                                ? "QoS route policy requires a rate limit"
                                : "only route policies may carry a rate limit");
}

/* Parser */

namespace {

enum class TokKind { Word, LParen, RParen, Comma, Colon, End };

struct Token {
    TokKind kind;
    std::string text;
    std::size_t pos;
};

bool is_name_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        switch (c) {
        case '(': out.push_back({TokKind::LParen, "(", i++}); continue;
        case ')': out.push_back({TokKind::RParen, ")", i++}); continue;
        case ',': out.push_back({TokKind::Comma, ",", i++}); continue;
        case ':': out.push_back({TokKind::Colon, ":", i++}); continue;
        default: break;
        }
        if (!is_name_char(c))
            throw ParseError(i, {"name", "'('", "')'", "','", "':'"}, std::string(1, c));
        std::size_t start = i;
        while (i < text.size() && is_name_char(text[i]))
            ++i;
        out.push_back({TokKind::Word, std::string(text.substr(start, i - start)), start});
    }
    out.push_back({TokKind::End, "", text.size()});
    return out;
}

class Parser {
public:
    Parser(std::string_view text, const ApplicationRegistry& registry)
        : toks_(tokenize(text))
        , registry_(registry)
    { }

    Policy run();

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool at_keyword(std::string_view kw) const
    {
        return peek().kind == TokKind::Word && to_upper(peek().text) == to_upper(kw);
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        throw ParseError(peek().pos, std::move(expected), peek().text);
    }

    void expect_keyword(std::string_view kw)
    {
        if (!at_keyword(kw))
            fail({"'" + std::string(kw) + "'"});
        next();
    }

    void expect(TokKind kind, const char* what)
    {
        if (peek().kind != kind)
            fail({what});
        next();
    }

    std::string name(const char* what)
    {
        if (peek().kind != TokKind::Word)
            fail({what});
        return next().text;
    }

    std::uint64_t integer(const char* what, std::uint64_t max)
    {
        const Token& t = peek();
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (t.kind != TokKind::Word || ec != std::errc() ||
            p != t.text.data() + t.text.size() || v > max)
            fail({what});
        next();
        return v;
    }

    HostPair pair();
    Waypoint waypoint();

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const ApplicationRegistry& registry_;
};

HostPair Parser::pair()
{
    expect(TokKind::LParen, "'('");
    std::string a = name("host name");
    expect(TokKind::Comma, "','");
    std::string b = name("host name");
    expect(TokKind::RParen, "')'");
    return HostPair(std::move(a), std::move(b));
}

Waypoint Parser::waypoint()
{
    Waypoint w{name("device name"), std::nullopt};
    if (peek().kind == TokKind::Colon) {
        next();
        w.egress_port =
            static_cast<std::uint32_t>(integer("port number", std::numeric_limits<std::uint32_t>::max()));
    }
    return w;
}

Policy Parser::run()
{
    Policy p;

    OperationKind kind;
    if (at_keyword("route"))
        kind = OperationKind::Route;
    else if (at_keyword("alert"))
        kind = OperationKind::Alert;
    else
        fail({"'route'", "'alert'"});
    next();

    const Token app_tok = peek();
    std::string app = name("application name");
    if (registry_.find(app) == nullptr)
        throw SemanticError("unknown application '" + app + "' at position " +
                            std::to_string(app_tok.pos));
    p.profile = registry_.profile(app);

    SiteScope scope;
    if (at_keyword("in")) {
        next();
        scope = SiteScope::Intra;
        p.source_region = name("region name");
        p.destination_region = p.source_region;
    } else if (at_keyword("from")) {
        next();
        scope = SiteScope::Inter;
        p.source_region = name("region name");
        expect_keyword("to");
        p.destination_region = name("region name");
        if (p.source_region == p.destination_region)
            throw SemanticError("inter-site policy names region '" + p.source_region +
                                "' as both source and destination");
    } else {
        fail({"'in'", "'from'"});
    }

    // Clauses are optional but ordered; stage counts how many slots are used up.
    int stage = 0;
    if (at_keyword("priority")) {
        next();
        stage = 1;
        auto v = integer("priority value", std::numeric_limits<int>::max());
        if (v < 1)
            throw SemanticError("priority must be >= 1");
        p.priority = static_cast<int>(v);
    }

    if (at_keyword("between")) {
        next();
        stage = 2;
        if (at_keyword("all")) {
            next();
            expect_keyword("hosts");
            p.address_space.hosts = PairSet::all_hosts();
        } else {
            std::set<HostPair> pairs;
            pairs.insert(pair());
            while (peek().kind == TokKind::Comma) {
                next();
                pairs.insert(pair());
            }
            p.address_space.hosts = PairSet(std::move(pairs));
        }
    }

    if (at_keyword("via")) {
        next();
        stage = 3;
        p.address_space.waypoints.push_back(waypoint());
        while (peek().kind == TokKind::Comma) {
            next();
            p.address_space.waypoints.push_back(waypoint());
        }
    }

    std::optional<BitsPerSecond> rate;
    if (at_keyword("ratelimit")) {
        next();
        stage = 4;
        auto v = integer("rate value", std::numeric_limits<std::uint32_t>::max());
        BitsPerSecond unit;
        if (at_keyword("mbps"))
            unit = kMbps;
        else if (at_keyword("gbps"))
            unit = kGbps;
        else
            fail({"'mbps'", "'gbps'"});
        next();
        if (v == 0)
            throw SemanticError("rate limit must be positive");
        rate = v * unit;
    }

    if (peek().kind != TokKind::End) {
        static constexpr const char* kClauses[] = {"'priority'", "'between'", "'via'",
                                                   "'ratelimit'"};
        std::vector<std::string> expected(std::begin(kClauses) + stage, std::end(kClauses));
        expected.push_back("end of input");
        fail(std::move(expected));
    }

    if (kind == OperationKind::Alert) {
        if (rate)
            throw SemanticError("alert policies cannot carry a rate limit");
        p.operation = scope == SiteScope::Intra ? NetworkOperation::IntraSiteAlert
                                                : NetworkOperation::InterSiteAlert;
    } else if (rate) {
        p.operation = scope == SiteScope::Intra ? NetworkOperation::IntraSiteRouteQoS
                                                : NetworkOperation::InterSiteRouteQoS;
        p.traffic_conditions.push_back({TrafficConditionKind::RateLimitPerFlow, *rate});
    } else {
        p.operation = scope == SiteScope::Intra ? NetworkOperation::IntraSiteRoute
                                                : NetworkOperation::InterSiteRoute;
    }

    validate(p);
    return p;
}

} // namespace

Policy parse_policy(std::string_view text, const ApplicationRegistry& registry)
{
    return Parser(text, registry).run();
}

std::string render_pairs(const PairSet& pairs)
{
    if (pairs.is_all())
        return "all hosts";
    std::string out;
    for (const auto& hp : pairs.pairs()) {
        if (!out.empty())
            out += ',';
        out += '(' + hp.first + ',' + hp.second + ')';
    }
    return out;
}

std::string render_policy(const Policy& p)
{
    const OperationClass cls = p.op_class();
    std::string out = cls.kind == OperationKind::Route ? "route " : "alert ";
    out += p.profile.application;
    if (cls.scope == SiteScope::Intra)
        out += " in " + p.source_region;
    else
        out += " from " + p.source_region + " to " + p.destination_region;

    if (p.priority != kDefaultPriority)
        out += " priority " + std::to_string(p.priority);

    if (!p.address_space.hosts.is_all())
        out += " between " + render_pairs(p.address_space.hosts);

    if (!p.address_space.waypoints.empty()) {
        out += " via ";
        bool first = true;
        for (const auto& w : p.address_space.waypoints) {
            if (!first)
                out += ',';
            first = false;
            out += w.device;
            if (w.egress_port)
                out += ':' + std::to_string(*w.egress_port);
        }
    }

    if (auto rate = p.rate_limit()) {
        if (*rate % kGbps == 0)
            out += " ratelimit " + std::to_string(*rate / kGbps) + " gbps";
        else
            out += " ratelimit " + std::to_string(*rate / kMbps) + " mbps";
    }
    return out;
}

} // namespace osdf
