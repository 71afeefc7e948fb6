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
#include <optional>
#include <string>
#include <vector>

#include "loqc/detector.hpp"
#include "loqc/fock.hpp"
#include "loqc/measure.hpp"
#include "loqc/optics.hpp"

namespace loqc {

/// Tolerance on 1 - fidelity for a corrected heralded branch.
inline constexpr double kBranchFidelityTolerance = 1e-9;

struct PhaseCorrection {
    std::size_t mode = 0;  // register mode index
    double phase = 0.0;    // radians, applied as a single-photon phase shifter
};

/// One heralded outcome of an ideal run, with the fix-up it requires.
struct AcceptedBranch {
    FockState pattern;
    double probability = 0.0;
    std::vector<PhaseCorrection> corrections;
    std::vector<std::size_t> output_modes;  // register modes holding the output, in target order
    SparseKet corrected_output;             // over output_modes
    double fidelity = 0.0;                  // against ProtocolRun::target
};

/// Ideal (perfect detector) execution of a heralded linear-optical protocol.
struct ProtocolRun {
    std::string name;
    std::vector<std::string> mode_labels;  // register mode -> label in the protocol's own numbering
    SparseKet final_ideal_state;           // after the optical network, before measurement
    std::vector<std::size_t> measured_modes;
    OutcomeTable outcome_table;
    AcceptanceRule acceptance;
    SparseKet target;                      // expected output over each branch's output modes
    std::vector<AcceptedBranch> accepted;

    double ideal_acceptance_probability() const;
    ProtocolStats stats(const DetectorModel& model) const { return protocol_stats(outcome_table, acceptance, model); }
};

/// Nonlinear sign shift on a single mode with at most two photons per term.
ProtocolRun run_ns(const SparseKet& input);

/// Controlled sign flip from two NS gates; heralded by |1,0,1,0> on the four
/// ancilla modes. Inputs are two-mode dual-rail kets in (one, zero) order.
ProtocolRun run_cz_1_16(const SparseKet& q1, const SparseKet& q2);

/// Teleports a single-mode a|0> + b|1> from mode 0 to mode 2.
ProtocolRun run_teleport_basic(const SparseKet& input);

/// 2n-mode teleportation resource.
SparseKet build_t_n(int n);

/// Teleports a single-mode a|0> + b|1> through |t_n>; the state arrives in
/// mode n+m when m photons are counted in modes 0..n.
ProtocolRun run_teleport_n(const SparseKet& input, int n);

/// 4n-mode resource whose double teleportation applies a controlled sign.
SparseKet build_cs_n(int n);

/// Teleports both qubits through |cs_n> (or `resource`, when given, laid out
/// like |cs_n>). Register: modes 0..3 are q1..q4, modes 4..4n+3 the resource.
ProtocolRun run_cz_teleported(const SparseKet& q1, const SparseKet& q2, int n,
                              const std::optional<SparseKet>& resource = std::nullopt);

/// Outcome table of the teleported sign flip without correction bookkeeping,
/// for resources that need not be the ideal |cs_n>.
OutcomeTable teleported_cz_outcomes(const SparseKet& q1, const SparseKet& q2, int n, const SparseKet& resource);
AcceptanceRule teleported_cz_acceptance(int n);

/// c-z_{1/4}: |cs_1> is prepared by c-z_{1/16} acting on two balanced
/// superpositions, then used to teleport the inputs.
struct CzQuarterRun {
    ProtocolRun preparation;
    SparseKet resource;            // prepared |cs_1>, teleport layout
    ProtocolRun teleport;
    // Teleport-stage outcome tables fed with each preparation outcome's
    // collapsed state, aligned with preparation.outcome_table.entries().
    std::vector<OutcomeTable> teleport_given_preparation;

    double ideal_probability() const;
    ProtocolStats preparation_stats(const DetectorModel& model) const { return preparation.stats(model); }
    ProtocolStats teleport_stats(const DetectorModel& model) const { return teleport.stats(model); }

    /// Both stages observed by the same detector model. Preparation outcomes
    /// that are falsely heralded pass their actual collapsed state on to the
    /// teleport stage.
    ProtocolStats composite_stats(const DetectorModel& model) const;
};

CzQuarterRun run_cz_quarter(const SparseKet& q1, const SparseKet& q2);

/// Preparation mode order mapping the c-z_{1/16} output (q1, q2, q3, q4) to
/// the |cs_1> layout.
inline constexpr std::size_t kCs1FromCzOrder[4] = {1, 0, 3, 2};

/// Controlled-phase uses needed to prepare |cs_n>: 6n - 3.
int cs_prep_gate_count(int n);

/// Applies the ideal controlled sign to a 4-mode (one, zero, one, zero) ket.
SparseKet apply_controlled_sign(const SparseKet& two_qubits);

}  // namespace loqc
