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

#include <filesystem>
#include <string_view>

#include "osdf/network.hpp"
#include "osdf/policy_store.hpp"

namespace osdf::testgen {

inline std::filesystem::path fixture(std::string_view relative)
{
    return std::filesystem::path(OSDF_SOURCE_DIR) / relative;
}

inline NetworkConfig fixture_config(std::string_view name)
{
    return load_config(fixture(std::string("configs/") + std::string(name)));
}

inline PolicyStore store_of(std::initializer_list<const char*> statements)
{
    PolicyStore s;
    for (const char* text : statements)
        s.add(parse_policy(text));
    return s;
}

} // namespace osdf::testgen
