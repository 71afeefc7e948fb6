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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "loqc/fock.hpp"
#include "loqc/optics.hpp"

namespace loqc::support {

inline Eigen::MatrixXcd random_unitary_matrix(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd z(dim, dim);
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = Complex(normal(rng), normal(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        Complex d = r(j, j);
        q.col(j) *= std::abs(d) > 0 ? std::conj(d) / std::abs(d) : Complex(1.0);
    }
    return q;
}

inline ModeUnitary random_unitary(std::size_t dim, std::mt19937_64& rng) {
    return ModeUnitary(random_unitary_matrix(dim, rng));
}

/// Random ket over `modes` modes with up to `max_photons` photons per term.
inline SparseKet random_ket(std::size_t modes, unsigned max_photons, std::size_t max_terms, std::mt19937_64& rng,
                            bool normalize = true) {
    std::uniform_int_distribution<unsigned> photons(0, max_photons);
    std::uniform_int_distribution<std::size_t> mode_pick(0, modes - 1);
    std::uniform_int_distribution<std::size_t> term_count(1, max_terms);
    std::normal_distribution<double> normal;
    SparseKet k(modes);
    const std::size_t terms = term_count(rng);
    for (std::size_t t = 0; t < terms; ++t) {
        FockState s = FockState::vacuum(modes);
        const unsigned n = photons(rng);
        for (unsigned p = 0; p < n; ++p) s[mode_pick(rng)] += 1;
        k.add(s, Complex(normal(rng), normal(rng)));
    }
    k.prune();
    if (normalize && !k.empty()) k = k.scaled(1.0 / std::sqrt(norm_squared(k)));
    return k;
}

inline double factorial(unsigned n) {
    double f = 1.0;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

/// Permanent by brute-force permutation enumeration.
inline Complex permanent(const Eigen::MatrixXcd& a) {
    const auto n = static_cast<int>(a.rows());
    if (n == 0) return 1.0;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Complex total{};
    do {
        Complex prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= a(i, perm[i]);
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// <out| G-hat |in> = Perm(G[rows of in, cols of out]) / sqrt(prod in_i! prod out_j!).
inline Complex transition_amplitude(const ModeUnitary& u, const FockState& in, const FockState& out) {
    if (in.total_photons() != out.total_photons()) return 0.0;
    std::vector<Eigen::Index> rows, cols;
    for (std::size_t i = 0; i < in.mode_count(); ++i)
        for (unsigned r = 0; r < in[i]; ++r) rows.push_back(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < out.mode_count(); ++j)
        for (unsigned r = 0; r < out[j]; ++r) cols.push_back(static_cast<Eigen::Index>(j));
    Eigen::MatrixXcd sub(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b) sub(a, b) = u.matrix()(rows[a], cols[b]);
    double norm = 1.0;
    for (std::size_t i = 0; i < in.mode_count(); ++i) norm *= factorial(in[i]);
    for (std::size_t j = 0; j < out.mode_count(); ++j) norm *= factorial(out[j]);
    return permanent(sub) / std::sqrt(norm);
}

/// All occupation tuples over `modes` modes with exactly `photons` photons.
inline std::vector<FockState> photon_sector(std::size_t modes, unsigned photons) {
    std::vector<FockState> out;
    FockState s = FockState::vacuum(modes);
    auto rec = [&](auto&& self, std::size_t mode, unsigned left) -> void {
        if (mode + 1 == modes) {
            s[mode] = left;
            out.push_back(s);
            return;
        }
        for (unsigned k = 0; k <= left; ++k) {
            s[mode] = k;
            self(self, mode + 1, left - k);
        }
    };
    if (modes == 0) {
        if (photons == 0) out.push_back(s);
        return out;
    }
    rec(rec, 0, photons);
    return out;
}

/// max over basis states of |a - b| amplitudes.
inline double max_amplitude_difference(const SparseKet& a, const SparseKet& b) {
    double d = 0.0;
    for (const auto& [basis, amp] : a.terms()) d = std::max(d, std::abs(amp - b.amplitude(basis)));
    for (const auto& [basis, amp] : b.terms()) d = std::max(d, std::abs(amp - a.amplitude(basis)));
    return d;
}

}  // namespace loqc::support
