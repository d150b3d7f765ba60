// SPDX-License-Identifier: Apache-2.0
//
// debris-tensor: tensor-based space debris detection for LEO satellite links
// Copyright (C) 2026 The debris-tensor authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace debris
{

// Bad argument, dimension mismatch or config violation.
class InvalidInput : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Non-finite objective or similar breakdown inside a solver.
class NumericalFailure : public std::runtime_error
{
public:
    NumericalFailure(const std::string &what, int iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

class IoError : public std::runtime_error
{
public:
    IoError(const std::string &what, std::string path)
        : std::runtime_error(what + ": " + path), path_(std::move(path)) {}

    const std::string &path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace debris
