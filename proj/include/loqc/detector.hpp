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
#include <vector>

#include "loqc/fock.hpp"
#include "loqc/measure.hpp"

namespace loqc {

/// Identical, independent photon counters with binomial loss and additive
/// Poisson noise.
class DetectorModel {
  public:
    /// Throws std::invalid_argument unless 0 <= loss <= 1, noise >= 0 and
    /// 0 < cutoff_mass < 1.
    DetectorModel(double loss, double noise, double poisson_cutoff_mass = 1e-12);

    static DetectorModel ideal() { return DetectorModel(0.0, 0.0); }

    double loss() const { return loss_; }
    double noise() const { return noise_; }
    double poisson_cutoff_mass() const { return cutoff_; }

    /// Smallest K with Poisson tail mass P(k > K) below the cutoff.
    unsigned noise_cutoff() const;

    /// P(detector registers `registered` | `arrived` photons reached it).
    double registration_probability(unsigned registered, unsigned arrived) const;

  private:
    double loss_;
    double noise_;
    double cutoff_;
};

/// C(N, n) (1-l)^n l^(N-n) for n <= N, else 0.
double p_loss(int n, int N, double l);

/// g^n e^-g / n!
double p_noise(int n, double g);

/// Distribution of registered counts, indexed by count.
struct RegistrationDistribution {
    std::vector<double> probabilities;

    double operator[](std::size_t count) const { return count < probabilities.size() ? probabilities[count] : 0.0; }
    double total() const;
};

/// Loss/noise convolution for one detector, Poisson support truncated at
/// model.noise_cutoff().
RegistrationDistribution registration_distribution(unsigned arrived, const DetectorModel& model);

/// Which registered patterns count as a heralded success. The measured
/// detectors are split into groups; a pattern is accepted when every group's
/// summed count lies in its [min_total, max_total] range. An exact pattern
/// is one singleton group per detector.
class AcceptanceRule {
  public:
    struct Group {
        std::vector<std::size_t> detectors;  // positions within the measured-mode list
        unsigned min_total = 0;
        unsigned max_total = 0;
    };

    AcceptanceRule() = default;

    static AcceptanceRule exact(const FockState& pattern);
    static AcceptanceRule grouped(std::size_t detector_count, std::vector<Group> groups);

    std::size_t detector_count() const { return detectors_; }
    const std::vector<Group>& groups() const { return groups_; }

    bool accepts(const FockState& pattern) const;

  private:
    AcceptanceRule(std::size_t detectors, std::vector<Group> groups);

    std::size_t detectors_ = 0;
    std::vector<Group> groups_;
};

/// P(every detector registers exactly what arrived).
double faithful_registration_probability(const FockState& arrived, const DetectorModel& model);

/// P(registered pattern is accepted | arrived pattern), detectors independent.
double herald_probability(const FockState& arrived, const AcceptanceRule& rule, const DetectorModel& model);

struct ProtocolStats {
    double p_s = 0.0;  // accepted pattern arrived and was registered as it arrived
    double p_d = 0.0;  // detectors report an accepted pattern
    double p_f = 0.0;  // 1 - p_s / p_d
    bool degenerate = false;  // p_d == 0, p_f reported as 0

    static ProtocolStats from(double p_s, double p_d);
};

ProtocolStats protocol_stats(const OutcomeTable& outcomes, const AcceptanceRule& rule, const DetectorModel& model);
ProtocolStats protocol_stats(const OutcomeTable& outcomes, const FockState& accepted_pattern, const DetectorModel& model);

}  // namespace loqc
