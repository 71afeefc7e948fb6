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

#include "loqc/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace loqc {

namespace {

std::vector<std::size_t> complement_modes(std::size_t total, std::span<const std::size_t> modes) {
    std::vector<bool> measured(total, false);
    for (std::size_t m : modes) {
        if (m >= total) throw std::invalid_argument("measured mode out of range");
        if (measured[m]) throw std::invalid_argument("duplicate measured mode");
        measured[m] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t m = 0; m < total; ++m)
        if (!measured[m]) rest.push_back(m);
    return rest;
}

SparseKet normalized(SparseKet k, double norm2) {
    return k.scaled(1.0 / std::sqrt(norm2));
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

OutcomeTable::OutcomeTable(std::vector<std::size_t> measured_modes, std::vector<std::size_t> remaining_modes,
                           std::vector<Outcome> entries)
    : measured_(std::move(measured_modes)), remaining_(std::move(remaining_modes)), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const Outcome& a, const Outcome& b) { return a.pattern < b.pattern; });
}

const Outcome* OutcomeTable::find(const FockState& pattern) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), pattern,
                               [](const Outcome& o, const FockState& p) { return o.pattern < p; });
    return (it != entries_.end() && it->pattern == pattern) ? &*it : nullptr;
}

double OutcomeTable::probability(const FockState& pattern) const {
    const Outcome* o = find(pattern);
    return o ? o->probability : 0.0;
}

double OutcomeTable::total_probability() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.probability;
    return s;
}

void OutcomeTable::write_csv(std::ostream& os) const {
    os << "pattern,probability,collapsed_state\n";
    char buf[32];
    for (const auto& e : entries_) {
        for (std::size_t i = 0; i < e.pattern.mode_count(); ++i) os << (i ? ";" : "") << e.pattern[i];
        std::snprintf(buf, sizeof buf, "%.12g", e.probability);
        os << ',' << buf << ',' << csv_quote(e.collapsed.to_json().dump()) << '\n';
    }
}

OutcomeTable measure_modes(const SparseKet& k, std::span<const std::size_t> modes) {
    if (k.empty()) throw std::invalid_argument("cannot measure an empty ket");
    std::vector<std::size_t> rest = complement_modes(k.mode_count(), modes);

    std::map<FockState, SparseKet> groups;
    for (const auto& [basis, amp] : k.terms()) {
        auto [it, inserted] = groups.try_emplace(basis.select(modes), rest.size());
        it->second.add(basis.select(rest), amp);
    }

    std::vector<Outcome> entries;
    entries.reserve(groups.size());
    for (auto& [pattern, branch] : groups) {
        double p = norm_squared(branch);
        if (p <= 0.0) continue;
        entries.push_back({pattern, p, normalized(std::move(branch), p)});
    }
    return OutcomeTable({modes.begin(), modes.end()}, std::move(rest), std::move(entries));
}

Projection project_pattern(const SparseKet& k, std::span<const std::size_t> modes, const FockState& pattern) {
    std::vector<std::size_t> rest = complement_modes(k.mode_count(), modes);
    if (pattern.mode_count() != modes.size()) throw std::invalid_argument("pattern length does not match measured modes");
    SparseKet branch(rest.size());
    for (const auto& [basis, amp] : k.terms())
        if (basis.select(modes) == pattern) branch.add(basis.select(rest), amp);
    double p = norm_squared(branch);
    if (p <= 0.0) return {0.0, SparseKet(rest.size())};
    return {p, normalized(std::move(branch), p)};
}

}  // namespace loqc
