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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace osdf {

// Root of every domain error raised by the library. The CLI maps these to
// exit code 2; anything else escaping is a bug.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t position, std::vector<std::string> expected,
               const std::string& found);

    std::size_t position() const { return position_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t position_;
    std::vector<std::string> expected_;
};

// Well-formed text that violates a policy invariant (region mismatch,
// unknown application, bad priority, ...).
class SemanticError : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

class DuplicateId : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class UnresolvableHost : public Error {
public:
    UnresolvableHost(std::uint64_t policy_id, const std::string& name);

    std::uint64_t policy_id() const { return policy_id_; }

private:
    std::uint64_t policy_id_;
};

class UnknownApplication : public Error {
public:
    using Error::Error;
};

class NoPath : public Error {
public:
    using Error::Error;
};

class PolicyNotApplicable : public Error {
public:
    using Error::Error;
};

class InvalidClass : public Error {
public:
    using Error::Error;
};

} // namespace osdf
