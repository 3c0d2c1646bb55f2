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

#include "osdf/policy_store.hpp"

#include <charconv>
#include <fstream>
#include <mutex>
#include <sstream>

#include "osdf/error.hpp"

namespace osdf {

PolicyStore::PolicyStore(const PolicyStore& other)
{
    std::shared_lock lock(other.mutex_);
    policies_ = other.policies_;
    revision_ = other.revision_;
    next_id_ = other.next_id_;
}

PolicyStore::PolicyStore(PolicyStore&& other) noexcept
{
    std::unique_lock lock(other.mutex_);
    policies_ = std::move(other.policies_);
    revision_ = other.revision_;
    next_id_ = other.next_id_;
}

PolicyStore& PolicyStore::operator=(const PolicyStore& other)
{
    if (this != &other) {
        std::scoped_lock lock(mutex_, other.mutex_);
        policies_ = other.policies_;
        revision_ = other.revision_;
        next_id_ = other.next_id_;
    }
    return *this;
}

PolicyStore& PolicyStore::operator=(PolicyStore&& other) noexcept
{
    if (this != &other) {
        std::scoped_lock lock(mutex_, other.mutex_);
        policies_ = std::move(other.policies_);
        revision_ = other.revision_;
        next_id_ = other.next_id_;
    }
    return *this;
}

PolicyId PolicyStore::add(Policy p)
{
    validate(p);
    std::unique_lock lock(mutex_);
    if (p.id.assigned()) {
        if (policies_.contains(p.id))
            throw DuplicateId("policy id " + to_string(p.id) + " already present");
        next_id_ = std::max(next_id_, p.id.value + 1);
    } else {
        p.id = PolicyId{next_id_++};
    }
    const PolicyId id = p.id;
    policies_.emplace(id, std::move(p));
    ++revision_;
    return id;
}

void PolicyStore::update(PolicyId id, Policy p)
{
    validate(p);
    std::unique_lock lock(mutex_);
    auto it = policies_.find(id);
    if (it == policies_.end())
        throw NotFound("no policy " + to_string(id));
    p.id = id;
    it->second = std::move(p);
    ++revision_;
}

Policy PolicyStore::remove(PolicyId id)
{
    std::unique_lock lock(mutex_);
    auto it = policies_.find(id);
    if (it == policies_.end())
        throw NotFound("no policy " + to_string(id));
    Policy out = std::move(it->second);
    policies_.erase(it);
    ++revision_;
    return out;
}

std::optional<Policy> PolicyStore::get(PolicyId id) const
{
    std::shared_lock lock(mutex_);
    auto it = policies_.find(id);
    if (it == policies_.end())
        return std::nullopt;
    return it->second;
}

bool PolicyStore::contains(PolicyId id) const
{
    std::shared_lock lock(mutex_);
    return policies_.contains(id);
}

std::vector<Policy> PolicyStore::list() const
{
    std::shared_lock lock(mutex_);
    std::vector<Policy> out;
    out.reserve(policies_.size());
    for (const auto& [id, p] : policies_)
        out.push_back(p);
    return out;
}

std::vector<Policy> PolicyStore::filter_by_operation(OperationClass cls) const
{
    std::shared_lock lock(mutex_);
    std::vector<Policy> out;
    for (const auto& [id, p] : policies_) {
        if (p.op_class() == cls)
            out.push_back(p);
    }
    return out;
}

std::size_t PolicyStore::size() const
{
    std::shared_lock lock(mutex_);
    return policies_.size();
}

std::uint64_t PolicyStore::revision() const
{
    std::shared_lock lock(mutex_);
    return revision_;
}

bool PolicyStore::operator==(const PolicyStore& other) const
{
    if (this == &other)
        return true;
    std::shared_lock a(mutex_);
    std::shared_lock b(other.mutex_);
    return policies_ == other.policies_;
}

/* persistence */

std::string serialize(const PolicyStore& store)
{
    std::string out;
    for (const auto& p : store.list())
        out += std::to_string(p.id.value) + ' ' + render_policy(p) + '\n';
    return out;
}

PolicyStore deserialize(std::string_view text, const ApplicationRegistry& registry)
{
    PolicyStore store;
    if (text.empty())
        return store;
    if (text.back() != '\n')
        throw FormatError("store file is truncated: last line has no terminator");

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t end = text.find('\n', start);
        const std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        const std::string where = "line " + std::to_string(line_no) + ": ";

        const std::size_t sp = line.find(' ');
        if (sp == std::string_view::npos || sp == 0)
            throw FormatError(where + "expected '<id> <policy>'");
        std::uint64_t id = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + sp, id);
        if (ec != std::errc() || ptr != line.data() + sp || id == 0)
            throw FormatError(where + "invalid policy id '" + std::string(line.substr(0, sp)) + "'");

        Policy p;
        try {
            p = parse_policy(line.substr(sp + 1), registry);
        } catch (const Error& e) {
            throw FormatError(where + e.what());
        }
        p.id = PolicyId{id};
        try {
            store.add(std::move(p));
        } catch (const DuplicateId& e) {
            throw FormatError(where + e.what());
        }
    }
    return store;
}

void save(const PolicyStore& store, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << serialize(store);
    out.flush();
    if (!out)
        throw IoError("failed writing '" + path.string() + "'");
}

PolicyStore load(const std::filesystem::path& path, const ApplicationRegistry& registry)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("failed reading '" + path.string() + "'");
    return deserialize(buf.str(), registry);
}

} // namespace osdf
