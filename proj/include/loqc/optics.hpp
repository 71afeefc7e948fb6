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
#include <span>

#include <Eigen/Dense>

#include "loqc/fock.hpp"

namespace loqc {

inline constexpr double kUnitarityTolerance = 1e-10;

/// m x m unitary acting on mode creation operators: a_i^dag -> sum_j g_ij a_j^dag.
class ModeUnitary {
  public:
    /// Throws std::invalid_argument if `matrix` is not square and unitary
    /// within kUnitarityTolerance.
    explicit ModeUnitary(Eigen::MatrixXcd matrix);

    static ModeUnitary identity(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(g_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return g_; }
    Complex operator()(std::size_t i, std::size_t j) const { return g_(i, j); }

    ModeUnitary adjoint() const;
    /// Composition: (a * b) applies b first, then a.
    ModeUnitary operator*(const ModeUnitary& rhs) const;

    /// max |(G^dag G - 1)_ij|
    double unitarity_error() const;

  private:
    struct Unchecked {};
    ModeUnitary(Eigen::MatrixXcd matrix, Unchecked) : g_(std::move(matrix)) {}

    Eigen::MatrixXcd g_;
};

ModeUnitary phase_shifter(double phi);

/// [[cos t, e^{i p} sin t], [-e^{-i p} sin t, cos t]]
ModeUnitary beam_splitter(double theta, double phi);

/// Acts as `u` on `target_modes` (u's index k maps to target_modes[k]) and
/// as the identity on all other modes.
ModeUnitary embed(const ModeUnitary& u, std::span<const std::size_t> target_modes, std::size_t total_modes);

/// The three-mode network realizing the nonlinear sign shift on mode 0 with
/// ancilla modes 1 and 2.
ModeUnitary ns_matrix();

/// (n+1)-mode discrete Fourier network, (F_n)_{jk} = w^{jk} / sqrt(n+1) with
/// w = exp(2 pi i / (n+1)).
ModeUnitary fourier_network(int n);

/// Transforms every Fock term |n_1..n_m> into
/// prod_i (sum_j g_ij a_j^dag)^{n_i} / sqrt(n_i!) |0>.
SparseKet apply(const ModeUnitary& u, const SparseKet& k);

}  // namespace loqc
