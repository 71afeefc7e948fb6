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

#include "loqc/optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace loqc {

namespace {

double unitarity_deviation(const Eigen::MatrixXcd& g) {
    Eigen::MatrixXcd d = g.adjoint() * g - Eigen::MatrixXcd::Identity(g.rows(), g.cols());
    return d.cwiseAbs().maxCoeff();
}

// sqrt(k) for the occupation numbers reachable here; grows on demand per call.
class SqrtTable {
  public:
    double operator()(unsigned k) {
        while (table_.size() <= k) table_.push_back(std::sqrt(static_cast<double>(table_.size())));
        return table_[k];
    }

  private:
    std::vector<double> table_;
};

}  // namespace

ModeUnitary::ModeUnitary(Eigen::MatrixXcd matrix) : g_(std::move(matrix)) {
    if (g_.rows() != g_.cols() || g_.rows() == 0) throw std::invalid_argument("mode unitary must be a non-empty square matrix");
    double err = unitarity_deviation(g_);
    if (!(err <= kUnitarityTolerance))
        throw std::invalid_argument("matrix is not unitary (max |G^dag G - 1| = " + std::to_string(err) + ")");
}

ModeUnitary ModeUnitary::identity(std::size_t dim) {
    return ModeUnitary(Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)), Unchecked{});
}

ModeUnitary ModeUnitary::adjoint() const { return ModeUnitary(g_.adjoint(), Unchecked{}); }

ModeUnitary ModeUnitary::operator*(const ModeUnitary& rhs) const {
    if (dim() != rhs.dim()) throw std::invalid_argument("cannot compose unitaries of different dimension");
    // Row convention: a_i^dag -> sum_j g_ij a_j^dag, so applying rhs then this
    // substitutes a_j^dag of rhs's image with row j of this.
    return ModeUnitary(rhs.g_ * g_, Unchecked{});
}

double ModeUnitary::unitarity_error() const { return unitarity_deviation(g_); }

ModeUnitary phase_shifter(double phi) {
    Eigen::MatrixXcd g(1, 1);
    g(0, 0) = std::polar(1.0, phi);
    return ModeUnitary(std::move(g));
}

ModeUnitary beam_splitter(double theta, double phi) {
    Eigen::MatrixXcd g(2, 2);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    g(0, 0) = c;
    g(0, 1) = std::polar(s, phi);
    g(1, 0) = -std::polar(s, -phi);
    g(1, 1) = c;
    return ModeUnitary(std::move(g));
}

ModeUnitary embed(const ModeUnitary& u, std::span<const std::size_t> target_modes, std::size_t total_modes) {
    if (target_modes.size() != u.dim()) throw std::invalid_argument("embed: target mode count does not match unitary dimension");
    std::vector<bool> used(total_modes, false);
    for (std::size_t m : target_modes) {
        if (m >= total_modes) throw std::invalid_argument("embed: target mode out of range");
        if (used[m]) throw std::invalid_argument("embed: duplicate target mode");
        used[m] = true;
    }
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(total_modes), static_cast<Eigen::Index>(total_modes));
    for (std::size_t a = 0; a < target_modes.size(); ++a)
        for (std::size_t b = 0; b < target_modes.size(); ++b)
            g(static_cast<Eigen::Index>(target_modes[a]), static_cast<Eigen::Index>(target_modes[b])) = u(a, b);
    return ModeUnitary(std::move(g));
}

ModeUnitary ns_matrix() {
    const double r2 = std::numbers::sqrt2;
    const double q = std::pow(2.0, -0.25);
    const double c = std::sqrt(3.0 / r2 - 2.0);
    Eigen::MatrixXcd g(3, 3);
    g << 1.0 - r2, q, c,
         q, 0.5, 0.5 - 1.0 / r2,
         c, 0.5 - 1.0 / r2, r2 - 0.5;
    return ModeUnitary(std::move(g));
}

ModeUnitary fourier_network(int n) {
    if (n < 1) throw std::invalid_argument("fourier_network requires n >= 1");
    const int d = n + 1;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    Eigen::MatrixXcd g(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) g(j, k) = std::polar(scale, 2.0 * std::numbers::pi * ((j * k) % d) / d);
    return ModeUnitary(std::move(g));
}

SparseKet apply(const ModeUnitary& u, const SparseKet& k) {
    const std::size_t m = k.mode_count();
    if (u.dim() != m) throw std::invalid_argument("apply: unitary dimension does not match ket mode count");

    // Nonzero entries of each row, so identity rows cost a single raise.
    std::vector<std::vector<std::pair<std::size_t, Complex>>> rows(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (std::abs(u(i, j)) > 0.0) rows[i].emplace_back(j, u(i, j));

    SqrtTable sqrt_of;
    SparseKet out(m);
    for (const auto& [basis, amp] : k.terms()) {
        std::map<FockState, Complex> work;
        work.emplace(FockState::vacuum(m), amp);
        for (std::size_t i = 0; i < m; ++i) {
            const unsigned ni = basis[i];
            for (unsigned rep = 0; rep < ni; ++rep) {
                std::map<FockState, Complex> next;
                for (const auto& [state, a] : work) {
                    for (const auto& [j, gij] : rows[i]) {
                        FockState raised = state;
                        raised[j] += 1;
                        next[raised] += a * gij * sqrt_of(raised[j]);
                    }
                }
                work = std::move(next);
            }
            // 1/sqrt(n_i!)
            double norm = 1.0;
            for (unsigned f = 2; f <= ni; ++f) norm *= sqrt_of(f);
            if (norm != 1.0)
                for (auto& [state, a] : work) a /= norm;
        }
        for (const auto& [state, a] : work) out.add(state, a);
    }
    out.prune();
    return out;
}

}  // namespace loqc
