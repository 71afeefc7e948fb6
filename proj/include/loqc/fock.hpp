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

#include <complex>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace loqc {

using Complex = std::complex<double>;
using Occupation = unsigned;

/// Terms whose amplitude magnitude falls below this are dropped after every
/// state operation.
inline constexpr double kPruneThreshold = 1e-12;

/// Occupation-number basis vector |n_0, n_1, ..., n_{m-1}>. Modes are 0-based.
class FockState {
  public:
    FockState() = default;
    explicit FockState(std::vector<Occupation> occupations) : occ_(std::move(occupations)) {}
    FockState(std::initializer_list<Occupation> occupations) : occ_(occupations) {}

    /// Throws std::invalid_argument on a negative entry.
    static FockState from_signed(std::span<const int> occupations);
    static FockState vacuum(std::size_t modes) { return FockState(std::vector<Occupation>(modes, 0)); }

    std::size_t mode_count() const { return occ_.size(); }
    Occupation operator[](std::size_t mode) const { return occ_[mode]; }
    Occupation& operator[](std::size_t mode) { return occ_[mode]; }
    const std::vector<Occupation>& occupations() const { return occ_; }
    unsigned total_photons() const;

    /// Occupations restricted to `modes`, in the given order.
    FockState select(std::span<const std::size_t> modes) const;
    FockState concat(const FockState& other) const;

    std::string to_string() const;

    auto operator<=>(const FockState&) const = default;
    bool operator==(const FockState&) const = default;

  private:
    std::vector<Occupation> occ_;
};

/// Superposition of Fock basis states, stored sparsely and ordered
/// lexicographically by occupation tuple. Sub-normalized kets are legal.
class SparseKet {
  public:
    using Terms = std::map<FockState, Complex>;

    SparseKet() = default;
    explicit SparseKet(std::size_t modes) : modes_(modes) {}

    std::size_t mode_count() const { return modes_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    /// Adds `amplitude` to the coefficient of `basis`. Mode count must match.
    void add(const FockState& basis, Complex amplitude);
    Complex amplitude(const FockState& basis) const;

    /// Drops terms below kPruneThreshold.
    void prune();

    SparseKet scaled(Complex factor) const;
    SparseKet operator+(const SparseKet& other) const;

    /// Reorders modes: output mode i takes input mode `order[i]`. `order`
    /// must be a permutation of 0..m-1.
    SparseKet permute_modes(std::span<const std::size_t> order) const;

    /// Multiplies each term by exp(i * phase * n_mode).
    SparseKet phase_shifted(std::size_t mode, double phase) const;

    bool homogeneous_photon_number() const;

    nlohmann::json to_json() const;
    static SparseKet from_json(const nlohmann::json& j);

  private:
    std::size_t modes_ = 0;
    Terms terms_;
};

/// Dual-rail encoded qubit: logical 0 is a photon in `zero_mode`, logical 1 a
/// photon in `one_mode`.
struct DualRailQubit {
    std::size_t one_mode = 0;
    std::size_t zero_mode = 1;

    /// Throws std::invalid_argument unless the indices are distinct and below
    /// `total_modes`.
    void validate(std::size_t total_modes) const;
};

SparseKet ket_basis(std::span<const int> occupations);
SparseKet ket_basis(std::initializer_list<int> occupations);
SparseKet ket_basis(const FockState& basis);

SparseKet tensor(const SparseKet& a, const SparseKet& b);
double norm_squared(const SparseKet& k);
Complex inner_product(const SparseKet& bra, const SparseKet& ket);

/// |<a|b>|^2 / (|a|^2 |b|^2). Throws std::invalid_argument for zero-norm
/// inputs or mismatched mode counts.
double fidelity_up_to_phase(const SparseKet& a, const SparseKet& b);

/// Two-mode ket for a|0>_L + b|1>_L in the (one, zero) mode ordering.
SparseKet dual_rail(Complex zero_amplitude, Complex one_amplitude);

/// Restricts `k` to `keep` (in that order) when the remaining modes hold the
/// same occupation pattern in every term. Returns nullopt otherwise.
std::optional<SparseKet> factor_out_spectators(const SparseKet& k, std::span<const std::size_t> keep);

}  // namespace loqc
