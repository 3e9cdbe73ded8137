// Copyright 2026 The hsps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hsps {

/// Precondition violated by a caller (unsorted input, mismatched durations, ...).
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed time-tag file. Carries the byte offset (or CSV line) where
/// parsing stopped.
struct format_error : std::runtime_error {
    format_error(const std::string &what, std::uint64_t offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::uint64_t offset;
};

/// File could not be opened, read or written.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A simulation request would produce more events than we are willing to hold.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// g2 is undefined for the given counts (a two-fold coincidence count is zero).
struct insufficient_data : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad experiment configuration or command-line values.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hsps
