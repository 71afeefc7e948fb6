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

#include "loqc/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loqc {

namespace {

double binomial_coefficient(int N, int n) {
    n = std::min(n, N - n);
    double c = 1.0;
    for (int k = 1; k <= n; ++k) c = c * (N - n + k) / k;
    return c;
}

// Registration distribution for counts 0..max_count, computed exactly.
std::vector<double> registration_prefix(unsigned arrived, unsigned max_count, const DetectorModel& model) {
    std::vector<double> out(max_count + 1, 0.0);
    for (unsigned r = 0; r <= max_count; ++r) out[r] = model.registration_probability(r, arrived);
    return out;
}

}  // namespace

DetectorModel::DetectorModel(double loss, double noise, double poisson_cutoff_mass)
    : loss_(loss), noise_(noise), cutoff_(poisson_cutoff_mass) {
    if (!(loss >= 0.0 && loss <= 1.0)) throw std::invalid_argument("detector loss must lie in [0, 1]");
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw std::invalid_argument("detector noise must be finite and >= 0");
    if (!(poisson_cutoff_mass > 0.0 && poisson_cutoff_mass < 1.0))
        throw std::invalid_argument("poisson cutoff mass must lie in (0, 1)");
}

unsigned DetectorModel::noise_cutoff() const {
    double cdf = 0.0;
    for (unsigned k = 0;; ++k) {
        cdf += p_noise(static_cast<int>(k), noise_);
        if (1.0 - cdf < cutoff_) return k;
        if (k > 100000) throw std::runtime_error("poisson cutoff search did not converge");
    }
}

double DetectorModel::registration_probability(unsigned registered, unsigned arrived) const {
    double p = 0.0;
    const unsigned kept_max = std::min(registered, arrived);
    for (unsigned kept = 0; kept <= kept_max; ++kept)
        p += p_loss(static_cast<int>(kept), static_cast<int>(arrived), loss_) *
             p_noise(static_cast<int>(registered - kept), noise_);
    return p;
}

double p_loss(int n, int N, double l) {
    if (n < 0 || N < 0) throw std::invalid_argument("p_loss requires non-negative counts");
    if (n > N) return 0.0;
    // std::pow(0, 0) == 1 covers the l = 0 and l = 1 edges.
    return binomial_coefficient(N, n) * std::pow(1.0 - l, n) * std::pow(l, N - n);
}

double p_noise(int n, double g) {
    if (n < 0) throw std::invalid_argument("p_noise requires a non-negative count");
    if (g == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(n * std::log(g) - g - std::lgamma(n + 1.0));
}

double RegistrationDistribution::total() const {
    double s = 0.0;
    for (double p : probabilities) s += p;
    return s;
}

RegistrationDistribution registration_distribution(unsigned arrived, const DetectorModel& model) {
    return {registration_prefix(arrived, arrived + model.noise_cutoff(), model)};
}

AcceptanceRule::AcceptanceRule(std::size_t detectors, std::vector<Group> groups)
    : detectors_(detectors), groups_(std::move(groups)) {
    std::vector<bool> used(detectors_, false);
    for (const auto& g : groups_) {
        if (g.detectors.empty()) throw std::invalid_argument("acceptance group has no detectors");
        if (g.min_total > g.max_total) throw std::invalid_argument("acceptance group range is empty");
        for (std::size_t d : g.detectors) {
            if (d >= detectors_ || used[d]) throw std::invalid_argument("acceptance groups must partition the detectors");
            used[d] = true;
        }
    }
    if (!std::all_of(used.begin(), used.end(), [](bool b) { return b; }))
        throw std::invalid_argument("acceptance groups must cover every detector");
}

AcceptanceRule AcceptanceRule::exact(const FockState& pattern) {
    std::vector<Group> groups;
    for (std::size_t i = 0; i < pattern.mode_count(); ++i) groups.push_back({{i}, pattern[i], pattern[i]});
    return AcceptanceRule(pattern.mode_count(), std::move(groups));
}

AcceptanceRule AcceptanceRule::grouped(std::size_t detector_count, std::vector<Group> groups) {
    return AcceptanceRule(detector_count, std::move(groups));
}

bool AcceptanceRule::accepts(const FockState& pattern) const {
    if (pattern.mode_count() != detectors_) return false;
    for (const auto& g : groups_) {
        unsigned total = 0;
        for (std::size_t d : g.detectors) total += pattern[d];
        if (total < g.min_total || total > g.max_total) return false;
    }
    return true;
}

double faithful_registration_probability(const FockState& arrived, const DetectorModel& model) {
    double p = 1.0;
    for (std::size_t i = 0; i < arrived.mode_count(); ++i) p *= model.registration_probability(arrived[i], arrived[i]);
    return p;
}

double herald_probability(const FockState& arrived, const AcceptanceRule& rule, const DetectorModel& model) {
    if (arrived.mode_count() != rule.detector_count()) throw std::invalid_argument("pattern length does not match acceptance rule");
    double p = 1.0;
    for (const auto& g : rule.groups()) {
        // Distribution of the group's summed registrations, truncated at max_total.
        std::vector<double> sum(g.max_total + 1, 0.0);
        sum[0] = 1.0;
        for (std::size_t d : g.detectors) {
            auto single = registration_prefix(arrived[d], g.max_total, model);
            std::vector<double> next(g.max_total + 1, 0.0);
            for (unsigned a = 0; a <= g.max_total; ++a) {
                if (sum[a] == 0.0) continue;
                for (unsigned b = 0; a + b <= g.max_total; ++b) next[a + b] += sum[a] * single[b];
            }
            sum = std::move(next);
        }
        double in_range = 0.0;
        for (unsigned t = g.min_total; t <= g.max_total; ++t) in_range += sum[t];
        p *= in_range;
        if (p == 0.0) break;
    }
    return p;
}

ProtocolStats ProtocolStats::from(double p_s, double p_d) {
    ProtocolStats s;
    s.p_s = p_s;
    s.p_d = p_d;
    if (p_d > 0.0) {
        s.p_f = std::clamp(1.0 - p_s / p_d, 0.0, 1.0);
    } else {
        s.degenerate = true;
    }
    return s;
}

ProtocolStats protocol_stats(const OutcomeTable& outcomes, const AcceptanceRule& rule, const DetectorModel& model) {
    if (outcomes.measured_modes().size() != rule.detector_count())
        throw std::invalid_argument("acceptance rule does not match the measured modes");
    double p_s = 0.0;
    double p_d = 0.0;
    for (const auto& e : outcomes.entries()) {
        if (rule.accepts(e.pattern)) p_s += e.probability * faithful_registration_probability(e.pattern, model);
        p_d += e.probability * herald_probability(e.pattern, rule, model);
    }
    return ProtocolStats::from(p_s, p_d);
}

ProtocolStats protocol_stats(const OutcomeTable& outcomes, const FockState& accepted_pattern, const DetectorModel& model) {
    return protocol_stats(outcomes, AcceptanceRule::exact(accepted_pattern), model);
}

}  // namespace loqc
