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
#include <shared_mutex>
#include <vector>

#include "osdf/policy.hpp"

namespace osdf {

/// The set of active policies. Mutations take an exclusive lock and bump
/// the revision; reads share the lock. Iteration is ordered by id.
class PolicyStore {
public:
    PolicyStore() = default;
    PolicyStore(const PolicyStore& other);
    PolicyStore(PolicyStore&& other) noexcept;
    PolicyStore& operator=(const PolicyStore& other);
    PolicyStore& operator=(PolicyStore&& other) noexcept;

    /// Uses p.id when assigned (DuplicateId if taken), otherwise the next
    /// sequential id. Validates p.
    PolicyId add(Policy p);

    /// Replaces the policy stored under id. NotFound if absent.
    void update(PolicyId id, Policy p);

    /// NotFound if absent.
    Policy remove(PolicyId id);

    std::optional<Policy> get(PolicyId id) const;
    bool contains(PolicyId id) const;
    std::vector<Policy> list() const;
    std::vector<Policy> filter_by_operation(OperationClass cls) const;

    std::size_t size() const;
    bool empty() const { return size() == 0; }
    std::uint64_t revision() const;

    // Only the policies take part; revision and id counter are history.
    bool operator==(const PolicyStore& other) const;

private:
    mutable std::shared_mutex mutex_;
    std::map<PolicyId, Policy> policies_;
    std::uint64_t revision_ = 0;
    std::uint64_t next_id_ = 1;
};

/// Writes one "<id> <canonical statement>" line per policy. Throws IoError.
void save(const PolicyStore& store, const std::filesystem::path& path);

/// Reads a file written by save(). Throws IoError or FormatError (with line
/// number) on unreadable or corrupted content.
PolicyStore load(const std::filesystem::path& path,
                 const ApplicationRegistry& registry = ApplicationRegistry::builtin());

/// In-memory form of the store file, shared by save/load and the CLI.
std::string serialize(const PolicyStore& store);
PolicyStore deserialize(std::string_view text,
                        const ApplicationRegistry& registry = ApplicationRegistry::builtin());

} // namespace osdf
