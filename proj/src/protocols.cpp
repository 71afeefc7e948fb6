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

#include "loqc/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace loqc {

namespace {

using std::numbers::pi;

struct BranchLayout {
    std::vector<std::size_t> output_modes;  // register modes, in target order
    std::vector<std::size_t> correctable;   // positions within output_modes that may need a phase
};

using LayoutFn = std::function<BranchLayout(const FockState& pattern)>;

struct Reference {
    SparseKet final_state;
    SparseKet target;
};

std::vector<std::size_t> iota_modes(std::size_t first, std::size_t count) {
    std::vector<std::size_t> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = first + i;
    return out;
}

std::vector<std::string> numbered_labels(std::size_t first, std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(std::to_string(first + i));
    return out;
}

std::size_t position_of(const std::vector<std::size_t>& modes, std::size_t mode) {
    auto it = std::find(modes.begin(), modes.end(), mode);
    if (it == modes.end()) throw std::logic_error("output mode was measured");
    return static_cast<std::size_t>(it - modes.begin());
}

void require_dual_rail(const SparseKet& q, const char* what) {
    if (q.mode_count() != 2 || q.empty()) throw std::invalid_argument(std::string(what) + " must be a non-empty two-mode ket");
    for (const auto& [basis, amp] : q.terms())
        if (basis.total_photons() != 1) throw std::invalid_argument(std::string(what) + " is not a dual-rail qubit state");
}

void require_single_rail(const SparseKet& q) {
    if (q.mode_count() != 1 || q.empty()) throw std::invalid_argument("teleport input must be a non-empty single-mode ket");
    for (const auto& [basis, amp] : q.terms())
        if (basis[0] > 1) throw std::invalid_argument("teleport input must lie in span{|0>, |1>}");
}

void require_resource_size(int n) {
    if (n < 1) throw std::invalid_argument("resource size n must be >= 1");
}

SparseKet balanced_single_rail() {
    SparseKet k(1);
    k.add({0}, 1.0 / std::numbers::sqrt2);
    k.add({1}, 1.0 / std::numbers::sqrt2);
    return k;
}

SparseKet balanced_dual_rail() { return dual_rail(1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2); }

// Phases on `correctable` positions that bring `actual` onto `target` up to
// one global factor. Both kets live on the branch's output modes.
std::vector<double> solve_phases(const SparseKet& actual, const SparseKet& target,
                                 const std::vector<std::size_t>& correctable) {
    auto ratio_where = [&](auto&& predicate) -> std::optional<Complex> {
        for (const auto& [basis, t] : target.terms()) {
            if (!predicate(basis)) continue;
            Complex a = actual.amplitude(basis);
            if (std::abs(a) > kPruneThreshold) return t / a;
        }
        return std::nullopt;
    };
    auto base = ratio_where([&](const FockState& b) {
        return std::all_of(correctable.begin(), correctable.end(), [&](std::size_t p) { return b[p] == 0; });
    });
    if (!base) throw std::logic_error("reference branch has no component to anchor the phase correction");
    std::vector<double> phases;
    for (std::size_t p : correctable) {
        auto r = ratio_where([&](const FockState& b) {
            for (std::size_t q : correctable)
                if (b[q] != (q == p ? 1u : 0u)) return false;
            return true;
        });
        if (!r) throw std::logic_error("reference branch cannot determine a phase correction");
        phases.push_back(std::remainder(std::arg(*r) - std::arg(*base), 2.0 * pi));
    }
    return phases;
}

ProtocolRun finish_run(std::string name, std::vector<std::string> labels, SparseKet final_state,
                       std::vector<std::size_t> measured, AcceptanceRule rule, SparseKet target, const LayoutFn& layout,
                       const std::optional<Reference>& reference) {
    ProtocolRun run;
    run.name = std::move(name);
    run.mode_labels = std::move(labels);
    run.outcome_table = measure_modes(final_state, measured);
    run.final_ideal_state = std::move(final_state);
    run.measured_modes = std::move(measured);
    run.acceptance = std::move(rule);
    run.target = std::move(target);

    std::optional<OutcomeTable> ref_table;
    if (reference) ref_table = measure_modes(reference->final_state, run.measured_modes);

    const auto& remaining = run.outcome_table.remaining_modes();
    for (const auto& entry : run.outcome_table.entries()) {
        if (!run.acceptance.accepts(entry.pattern)) continue;
        BranchLayout bl = layout(entry.pattern);
        std::vector<std::size_t> out_pos;
        for (std::size_t m : bl.output_modes) out_pos.push_back(position_of(remaining, m));

        AcceptedBranch branch;
        branch.pattern = entry.pattern;
        branch.probability = entry.probability;
        branch.output_modes = bl.output_modes;

        SparseKet collapsed = entry.collapsed;
        if (!bl.correctable.empty()) {
            if (!reference) throw std::logic_error("phase-corrected protocol needs a reference run");
            const Outcome* ref = ref_table->find(entry.pattern);
            if (!ref) throw std::logic_error("heralded pattern " + entry.pattern.to_string() + " absent from reference run");
            auto ref_out = factor_out_spectators(ref->collapsed, out_pos);
            if (!ref_out) throw std::logic_error("reference branch is entangled with ancilla modes");
            auto phases = solve_phases(*ref_out, reference->target, bl.correctable);
            for (std::size_t i = 0; i < phases.size(); ++i) {
                std::size_t reg_mode = bl.output_modes[bl.correctable[i]];
                if (std::abs(phases[i]) > 1e-12) {
                    branch.corrections.push_back({reg_mode, phases[i]});
                    collapsed = collapsed.phase_shifted(position_of(remaining, reg_mode), phases[i]);
                }
            }
        }

        auto out = factor_out_spectators(collapsed, out_pos);
        branch.fidelity = out ? fidelity_up_to_phase(*out, run.target) : 0.0;
        if (out) branch.corrected_output = std::move(*out);
        if (branch.fidelity < 1.0 - kBranchFidelityTolerance)
            throw std::logic_error(run.name + ": heralded branch " + entry.pattern.to_string() +
                                   " does not reach the target state (fidelity " + std::to_string(branch.fidelity) + ")");
        run.accepted.push_back(std::move(branch));
    }
    return run;
}

SparseKet apply_ns_target(const SparseKet& input) {
    SparseKet out(1);
    for (const auto& [basis, amp] : input.terms()) out.add(basis, basis[0] == 2 ? -amp : amp);
    return out;
}

// Register of a teleported sign flip: q1..q4 then resource modes 1..4n.
std::size_t cs_mode(int resource_label) {
    return 3 + static_cast<std::size_t>(resource_label);
}

std::vector<std::size_t> cz_teleport_measured(int n) {
    std::vector<std::size_t> measured{0};
    for (int r = 1; r <= n; ++r) measured.push_back(cs_mode(r));
    measured.push_back(2);
    for (int r = 2 * n + 1; r <= 3 * n; ++r) measured.push_back(cs_mode(r));
    return measured;
}

SparseKet cz_teleport_network(const SparseKet& q1, const SparseKet& q2, int n, const SparseKet& resource) {
    const std::size_t modes = 4 + 4 * static_cast<std::size_t>(n);
    SparseKet state = tensor(tensor(q1, q2), resource);
    const ModeUnitary f = fourier_network(n);
    std::vector<std::size_t> first{0}, second{2};
    for (int r = 1; r <= n; ++r) first.push_back(cs_mode(r));
    for (int r = 2 * n + 1; r <= 3 * n; ++r) second.push_back(cs_mode(r));
    state = apply(embed(f, first, modes), state);
    return apply(embed(f, second, modes), state);
}

// Term i of |t_n>: 1^i 0^(n-i) 0^i 1^(n-i).
FockState t_pattern_term(int n, int i) {
    std::vector<Occupation> occ;
    occ.reserve(2 * static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) occ.push_back(k < i ? 1 : 0);
    for (int k = 0; k < n; ++k) occ.push_back(k < i ? 0 : 1);
    return FockState(std::move(occ));
}

}  // namespace

double ProtocolRun::ideal_acceptance_probability() const {
    double p = 0.0;
    for (const auto& b : accepted) p += b.probability;
    return p;
}

SparseKet apply_controlled_sign(const SparseKet& two_qubits) {
    if (two_qubits.mode_count() != 4) throw std::invalid_argument("controlled sign acts on a four-mode two-qubit ket");
    SparseKet out(4);
    for (const auto& [basis, amp] : two_qubits.terms()) out.add(basis, (basis[0] == 1 && basis[2] == 1) ? -amp : amp);
    return out;
}

ProtocolRun run_ns(const SparseKet& input) {
    if (input.mode_count() != 1 || input.empty()) throw std::invalid_argument("NS input must be a non-empty single-mode ket");
    for (const auto& [basis, amp] : input.terms())
        if (basis[0] > 2) throw std::invalid_argument("NS gate is defined on at most two photons");

    SparseKet state = apply(ns_matrix(), tensor(input, ket_basis({1, 0})));
    auto layout = [](const FockState&) { return BranchLayout{{0}, {}}; };
    return finish_run("ns", numbered_labels(0, 3), std::move(state), {1, 2}, AcceptanceRule::exact({1, 0}),
                      apply_ns_target(input), layout, std::nullopt);
}

ProtocolRun run_cz_1_16(const SparseKet& q1, const SparseKet& q2) {
    require_dual_rail(q1, "first qubit");
    require_dual_rail(q2, "second qubit");
    const std::size_t modes = 8;
    SparseKet state = tensor(tensor(q1, q2), ket_basis({1, 0, 1, 0}));
    const std::size_t bs_modes[] = {0, 2};
    const std::size_t ns_a[] = {0, 4, 5};
    const std::size_t ns_b[] = {2, 6, 7};
    state = apply(embed(beam_splitter(pi / 4, 0), bs_modes, modes), state);
    state = apply(embed(ns_matrix(), ns_a, modes), state);
    state = apply(embed(ns_matrix(), ns_b, modes), state);
    state = apply(embed(beam_splitter(-pi / 4, 0), bs_modes, modes), state);
    auto layout = [](const FockState&) { return BranchLayout{{0, 1, 2, 3}, {}}; };
    return finish_run("cz16", numbered_labels(1, 8), std::move(state), {4, 5, 6, 7},
                      AcceptanceRule::exact({1, 0, 1, 0}), apply_controlled_sign(tensor(q1, q2)), layout, std::nullopt);
}

ProtocolRun run_teleport_basic(const SparseKet& input) {
    require_single_rail(input);
    auto network = [](const SparseKet& in) {
        SparseKet state = tensor(in, ket_basis({1, 0}));
        const std::size_t resource_modes[] = {1, 2};
        const std::size_t bell_modes[] = {0, 1};
        state = apply(embed(beam_splitter(pi / 4, 0), resource_modes, 3), state);
        return apply(embed(beam_splitter(-pi / 4, 0), bell_modes, 3), state);
    };
    auto layout = [](const FockState&) { return BranchLayout{{2}, {0}}; };
    auto rule = AcceptanceRule::grouped(2, {{{0, 1}, 1, 1}});
    SparseKet ref_in = balanced_single_rail();
    return finish_run("teleport1", numbered_labels(0, 3), network(input), {0, 1}, std::move(rule), input, layout,
                      Reference{network(ref_in), ref_in});
}

SparseKet build_t_n(int n) {
    require_resource_size(n);
    SparseKet out(2 * static_cast<std::size_t>(n));
    const double amp = 1.0 / std::sqrt(n + 1.0);
    for (int i = 0; i <= n; ++i) out.add(t_pattern_term(n, i), amp);
    return out;
}

ProtocolRun run_teleport_n(const SparseKet& input, int n) {
    require_single_rail(input);
    require_resource_size(n);
    const std::size_t modes = 2 * static_cast<std::size_t>(n) + 1;
    const SparseKet resource = build_t_n(n);
    auto network = [&](const SparseKet& in) {
        return apply(embed(fourier_network(n), iota_modes(0, n + 1), modes), tensor(in, resource));
    };
    auto layout = [n](const FockState& pattern) {
        return BranchLayout{{static_cast<std::size_t>(n) + pattern.total_photons()}, {0}};
    };
    auto rule = AcceptanceRule::grouped(n + 1, {{iota_modes(0, n + 1), 1, static_cast<unsigned>(n)}});
    SparseKet ref_in = balanced_single_rail();
    return finish_run("teleportn", numbered_labels(0, modes), network(input), iota_modes(0, n + 1), std::move(rule),
                      input, layout, Reference{network(ref_in), ref_in});
}

SparseKet build_cs_n(int n) {
    require_resource_size(n);
    SparseKet out(4 * static_cast<std::size_t>(n));
    const double amp = 1.0 / (n + 1.0);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const FockState a = t_pattern_term(n, i);
            const FockState b = t_pattern_term(n, j);
            const double sign = ((n - i) * (n - j)) % 2 == 0 ? 1.0 : -1.0;
            out.add(a.concat(b), sign * amp);
        }
    }
    return out;
}

AcceptanceRule teleported_cz_acceptance(int n) {
    require_resource_size(n);
    const auto un = static_cast<unsigned>(n);
    return AcceptanceRule::grouped(2 * (n + 1), {{iota_modes(0, n + 1), 1, un}, {iota_modes(n + 1, n + 1), 1, un}});
}

OutcomeTable teleported_cz_outcomes(const SparseKet& q1, const SparseKet& q2, int n, const SparseKet& resource) {
    require_resource_size(n);
    if (resource.mode_count() != 4 * static_cast<std::size_t>(n)) throw std::invalid_argument("resource must span 4n modes");
    return measure_modes(cz_teleport_network(q1, q2, n, resource), cz_teleport_measured(n));
}

ProtocolRun run_cz_teleported(const SparseKet& q1, const SparseKet& q2, int n, const std::optional<SparseKet>& resource) {
    require_dual_rail(q1, "first qubit");
    require_dual_rail(q2, "second qubit");
    require_resource_size(n);
    const SparseKet cs = resource ? *resource : build_cs_n(n);
    if (cs.mode_count() != 4 * static_cast<std::size_t>(n)) throw std::invalid_argument("resource must span 4n modes");

    std::vector<std::string> labels{"q1", "q2", "q3", "q4"};
    for (const auto& l : numbered_labels(1, 4 * static_cast<std::size_t>(n))) labels.push_back(l);

    auto layout = [n](const FockState& pattern) {
        unsigned k1 = 0, k2 = 0;
        for (int i = 0; i <= n; ++i) k1 += pattern[i];
        for (int i = n + 1; i <= 2 * n + 1; ++i) k2 += pattern[i];
        return BranchLayout{{cs_mode(n + static_cast<int>(k1)), 1, cs_mode(3 * n + static_cast<int>(k2)), 3}, {0, 2}};
    };
    const SparseKet plus = balanced_dual_rail();
    return finish_run("czn", std::move(labels), cz_teleport_network(q1, q2, n, cs), cz_teleport_measured(n),
                      teleported_cz_acceptance(n), apply_controlled_sign(tensor(q1, q2)), layout,
                      Reference{cz_teleport_network(plus, plus, n, cs), apply_controlled_sign(tensor(plus, plus))});
}

double CzQuarterRun::ideal_probability() const {
    return preparation.ideal_acceptance_probability() * teleport.ideal_acceptance_probability();
}

ProtocolStats CzQuarterRun::composite_stats(const DetectorModel& model) const {
    const auto& prep_entries = preparation.outcome_table.entries();
    double p_s = 0.0;
    double p_d = 0.0;
    for (std::size_t e = 0; e < prep_entries.size(); ++e) {
        const Outcome& prep = prep_entries[e];
        const double herald = herald_probability(prep.pattern, preparation.acceptance, model);
        if (herald == 0.0) continue;
        ProtocolStats second = protocol_stats(teleport_given_preparation[e], teleport.acceptance, model);
        p_d += prep.probability * herald * second.p_d;
        if (preparation.acceptance.accepts(prep.pattern))
            p_s += prep.probability * faithful_registration_probability(prep.pattern, model) * second.p_s;
    }
    return ProtocolStats::from(p_s, p_d);
}

CzQuarterRun run_cz_quarter(const SparseKet& q1, const SparseKet& q2) {
    require_dual_rail(q1, "first qubit");
    require_dual_rail(q2, "second qubit");
    const SparseKet plus = apply(beam_splitter(pi / 4, 0), ket_basis({1, 0}));

    CzQuarterRun run;
    run.preparation = run_cz_1_16(plus, plus);
    run.preparation.name = "cz4-prepare";
    if (run.preparation.accepted.size() != 1) throw std::logic_error("c-z_{1/16} should herald exactly one pattern");
    run.resource = run.preparation.accepted.front().corrected_output.permute_modes(kCs1FromCzOrder);
    if (fidelity_up_to_phase(run.resource, build_cs_n(1)) < 1.0 - kBranchFidelityTolerance)
        throw std::logic_error("prepared resource does not match |cs_1>");

    run.teleport = run_cz_teleported(q1, q2, 1, run.resource);
    run.teleport.name = "cz4-teleport";
    for (const auto& prep : run.preparation.outcome_table.entries())
        run.teleport_given_preparation.push_back(
            teleported_cz_outcomes(q1, q2, 1, prep.collapsed.permute_modes(kCs1FromCzOrder)));
    return run;
}

int cs_prep_gate_count(int n) {
    require_resource_size(n);
    return 6 * n - 3;
}

}  // namespace loqc
