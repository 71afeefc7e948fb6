// Copyright 2026 The loqc Authors
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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "loqc/fock.hpp"

namespace loqc::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitOutput = 3,
    kExitUnreachable = 4,
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Grid syntax: "a,b,c" (explicit list), "start:stop:count" (linear,
/// inclusive) or "log:start:stop:count" (geometric, inclusive). Throws
/// std::invalid_argument on malformed input.
std::vector<double> parse_grid(std::string_view spec);

/// Logical input for a protocol: "0", "1", "2" or sums like "0+2" for ns;
/// one symbol of {0,1,+,-} for teleport1/teleportn; two symbols for the
/// two-qubit protocols. Returns one ket per input register.
std::vector<SparseKet> parse_input(std::string_view protocol, std::string_view spec);

bool is_simulated_protocol(std::string_view protocol);

/// "%.12g"
std::string format_number(double x);

}  // namespace loqc::cli
