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

#include "loqc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace loqc {

FockState FockState::from_signed(std::span<const int> occupations) {
    std::vector<Occupation> occ;
    occ.reserve(occupations.size());
    for (int n : occupations) {
        if (n < 0) throw std::invalid_argument("negative photon number in occupation list");
        occ.push_back(static_cast<Occupation>(n));
    }
    return FockState(std::move(occ));
}

unsigned FockState::total_photons() const { return std::accumulate(occ_.begin(), occ_.end(), 0u); }

FockState FockState::select(std::span<const std::size_t> modes) const {
    std::vector<Occupation> out;
    out.reserve(modes.size());
    for (std::size_t m : modes) out.push_back(occ_.at(m));
    return FockState(std::move(out));
}

FockState FockState::concat(const FockState& other) const {
    std::vector<Occupation> out = occ_;
    out.insert(out.end(), other.occ_.begin(), other.occ_.end());
    return FockState(std::move(out));
}

std::string FockState::to_string() const {
    std::ostringstream os;
    os << '|';
    for (std::size_t i = 0; i < occ_.size(); ++i) {
        if (i) os << ',';
        os << occ_[i];
    }
    os << '>';
    return os.str();
}

void SparseKet::add(const FockState& basis, Complex amplitude) {
    if (basis.mode_count() != modes_) throw std::invalid_argument("basis state mode count does not match ket");
    terms_[basis] += amplitude;
}

Complex SparseKet::amplitude(const FockState& basis) const {
    auto it = terms_.find(basis);
    return it == terms_.end() ? Complex{} : it->second;
}

void SparseKet::prune() {
    std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; });
}

SparseKet SparseKet::scaled(Complex factor) const {
    SparseKet out(modes_);
    for (const auto& [basis, amp] : terms_) out.terms_.emplace_hint(out.terms_.end(), basis, amp * factor);
    out.prune();
    return out;
}

SparseKet SparseKet::operator+(const SparseKet& other) const {
    if (other.modes_ != modes_) throw std::invalid_argument("cannot add kets over different mode counts");
    SparseKet out = *this;
    for (const auto& [basis, amp] : other.terms_) out.terms_[basis] += amp;
    out.prune();
    return out;
}

SparseKet SparseKet::permute_modes(std::span<const std::size_t> order) const {
    if (order.size() != modes_) throw std::invalid_argument("permutation length does not match mode count");
    std::vector<bool> seen(modes_, false);
    for (std::size_t m : order) {
        if (m >= modes_ || seen[m]) throw std::invalid_argument("mode order is not a permutation");
        seen[m] = true;
    }
    SparseKet out(modes_);
    for (const auto& [basis, amp] : terms_) out.terms_.emplace(basis.select(order), amp);
    return out;
}

SparseKet SparseKet::phase_shifted(std::size_t mode, double phase) const {
    if (mode >= modes_) throw std::invalid_argument("phase shift mode out of range");
    SparseKet out(modes_);
    for (const auto& [basis, amp] : terms_)
        out.terms_.emplace_hint(out.terms_.end(), basis, amp * std::polar(1.0, phase * basis[mode]));
    return out;
}

bool SparseKet::homogeneous_photon_number() const {
    if (terms_.empty()) return true;
    unsigned n = terms_.begin()->first.total_photons();
    return std::all_of(terms_.begin(), terms_.end(), [n](const auto& kv) { return kv.first.total_photons() == n; });
}

nlohmann::json SparseKet::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [basis, amp] : terms_)
        terms.push_back({{"occ", basis.occupations()}, {"re", amp.real()}, {"im", amp.imag()}});
    return {{"modes", modes_}, {"terms", std::move(terms)}};
}

SparseKet SparseKet::from_json(const nlohmann::json& j) {
    SparseKet out(j.at("modes").get<std::size_t>());
    for (const auto& t : j.at("terms")) {
        auto occ = t.at("occ").get<std::vector<int>>();
        out.add(FockState::from_signed(occ), {t.at("re").get<double>(), t.at("im").get<double>()});
    }
    out.prune();
    return out;
}

void DualRailQubit::validate(std::size_t total_modes) const {
    if (one_mode == zero_mode) throw std::invalid_argument("dual-rail modes must be distinct");
    if (one_mode >= total_modes || zero_mode >= total_modes)
        throw std::invalid_argument("dual-rail mode index out of range");
}

SparseKet ket_basis(const FockState& basis) {
    SparseKet out(basis.mode_count());
    out.add(basis, 1.0);
    return out;
}

SparseKet ket_basis(std::span<const int> occupations) { return ket_basis(FockState::from_signed(occupations)); }

SparseKet ket_basis(std::initializer_list<int> occupations) {
    return ket_basis(std::span<const int>(occupations.begin(), occupations.size()));
}

SparseKet tensor(const SparseKet& a, const SparseKet& b) {
    SparseKet out(a.mode_count() + b.mode_count());
    for (const auto& [ba, aa] : a.terms())
        for (const auto& [bb, ab] : b.terms()) out.add(ba.concat(bb), aa * ab);
    out.prune();
    return out;
}

double norm_squared(const SparseKet& k) {
    double s = 0.0;
    for (const auto& [basis, amp] : k.terms()) s += std::norm(amp);
    return s;
}

Complex inner_product(const SparseKet& bra, const SparseKet& ket) {
    if (bra.mode_count() != ket.mode_count()) throw std::invalid_argument("inner product of kets over different mode counts");
    Complex s{};
    const auto& small = bra.size() <= ket.size() ? bra : ket;
    const auto& large = bra.size() <= ket.size() ? ket : bra;
    for (const auto& [basis, amp] : small.terms()) {
        Complex other = large.amplitude(basis);
        s += (&small == &bra) ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return s;
}

double fidelity_up_to_phase(const SparseKet& a, const SparseKet& b) {
    if (a.mode_count() != b.mode_count()) throw std::invalid_argument("fidelity of kets over different mode counts");
    double na = norm_squared(a);
    double nb = norm_squared(b);
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("fidelity undefined for a zero-norm ket");
    return std::clamp(std::norm(inner_product(a, b)) / (na * nb), 0.0, 1.0);
}

SparseKet dual_rail(Complex zero_amplitude, Complex one_amplitude) {
    SparseKet out(2);
    out.add({0, 1}, zero_amplitude);
    out.add({1, 0}, one_amplitude);
    out.prune();
    return out;
}

std::optional<SparseKet> factor_out_spectators(const SparseKet& k, std::span<const std::size_t> keep) {
    std::vector<bool> kept(k.mode_count(), false);
    for (std::size_t m : keep) {
        if (m >= k.mode_count() || kept[m]) throw std::invalid_argument("invalid mode list for spectator factoring");
        kept[m] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t m = 0; m < k.mode_count(); ++m)
        if (!kept[m]) rest.push_back(m);

    SparseKet out(keep.size());
    std::optional<FockState> spectators;
    for (const auto& [basis, amp] : k.terms()) {
        FockState s = basis.select(rest);
        if (!spectators) spectators = s;
        else if (*spectators != s) return std::nullopt;
        out.add(basis.select(keep), amp);
    }
    out.prune();
    return out;
}

}  // namespace loqc
