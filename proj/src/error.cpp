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

#include "osdf/error.hpp"

namespace osdf {

namespace {

std::string describe(std::size_t position,
                     const std::vector<std::string>& expected,
                     const std::string& found)
{
    std::string msg = "parse error at position " + std::to_string(position);
    if (!expected.empty()) {
        msg += ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i != 0)
                msg += i + 1 == expected.size() ? " or " : ", ";
            msg += expected[i];
        }
    }
    msg += found.empty() ? ", found end of input" : ", found '" + found + "'";
    return msg;
}

} // namespace

ParseError::ParseError(std::size_t position, std::vector<std::string> expected,
                       const std::string& found)
    : Error(describe(position, expected, found))
    , position_(position)
    , expected_(std::move(expected))
{ }

UnresolvableHost::UnresolvableHost(std::uint64_t policy_id, const std::string& name)
    : Error("policy P" + std::to_string(policy_id) + " references unknown host '" +
            name + "'")
    , policy_id_(policy_id)
{ }

} // namespace osdf
