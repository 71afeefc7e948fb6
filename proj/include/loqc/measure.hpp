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

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "loqc/fock.hpp"

namespace loqc {

struct Outcome {
    FockState pattern;     // photon counts on the measured modes, in measurement order
    double probability = 0.0;
    SparseKet collapsed;   // normalized state of the unmeasured modes
};

/// Ideal photon-number measurement record. Entries are sorted by pattern and
/// carry nonzero probability only.
class OutcomeTable {
  public:
    OutcomeTable() = default;
    OutcomeTable(std::vector<std::size_t> measured_modes, std::vector<std::size_t> remaining_modes,
                 std::vector<Outcome> entries);

    const std::vector<std::size_t>& measured_modes() const { return measured_; }
    const std::vector<std::size_t>& remaining_modes() const { return remaining_; }
    const std::vector<Outcome>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    /// nullptr when the pattern never occurs.
    const Outcome* find(const FockState& pattern) const;
    double probability(const FockState& pattern) const;
    double total_probability() const;

    /// CSV with header pattern,probability,collapsed_state.
    void write_csv(std::ostream& os) const;

  private:
    std::vector<std::size_t> measured_;
    std::vector<std::size_t> remaining_;
    std::vector<Outcome> entries_;
};

/// Throws std::invalid_argument on an empty ket or an invalid mode list.
OutcomeTable measure_modes(const SparseKet& k, std::span<const std::size_t> modes);

struct Projection {
    double probability = 0.0;
    SparseKet collapsed;   // empty (no terms) when probability is 0
    bool empty() const { return collapsed.empty(); }
};

Projection project_pattern(const SparseKet& k, std::span<const std::size_t> modes, const FockState& pattern);

}  // namespace loqc
