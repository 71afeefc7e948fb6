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

#include <optional>
#include <string_view>

namespace loqc {

/// Loss-only (noise-free) analysis of teleportation through |t_n> when the
/// teleported mode holds one photon.

/// (1/(n+1)) sum_{i=1..n} (1-l)^i
double ps_teleport(int n, double l);

/// (1 - (1-l)^n)(1-l) / ((n+1) l); undefined at l = 0.
double ps_teleport_closed(int n, double l);

/// (1/(n+1)) sum_{i=1..n} [ sum_{j=0..n+1-i} C(j+i, j) l^j ] (1-l)^i
double pd_teleport(int n, double l);

/// 1 - ps/pd, 0 when pd == 0.
double pf_teleport(int n, double l);

/// Teleported controlled sign: both teleportations must succeed.
double ps_cz(int n, double l);
double pd_cz(int n, double l);
double pf_cz(int n, double l);

enum class GateMode { teleport, controlled_sign };

std::optional<GateMode> parse_gate_mode(std::string_view name);
std::string_view to_string(GateMode mode);

struct TeleportAnalysis {
    int n = 0;
    double l = 0.0;
    double p_s = 0.0;
    double p_d = 0.0;
    double p_f = 0.0;
    bool degenerate = false;  // p_d == 0
};

TeleportAnalysis analyze(int n, double l, GateMode mode);

struct CriticalPoint {
    int n_c = 0;
    double p_s_max = 0.0;
    double p_f_at_nc = 0.0;
    bool converged = true;  // false when the maximum sits on the n_max boundary
};

/// Exhaustive scan of n in [1, n_max] for the largest success probability;
/// ties go to the smaller n. Requires 0 < l <= 1.
CriticalPoint find_nc(double l, GateMode mode, int n_max = 1000);

struct SecondStageTradeoff {
    double success = 0.0;            // (1-p)^{2n}
    double rejected_fraction = 0.0;  // 1 - (1-p)^{n-1}
};

/// `p` is the per-detector probability of losing at least one photon.
SecondStageTradeoff second_stage_tradeoff(double p, int n);

struct ThresholdResult {
    double target = 0.0;
    GateMode mode = GateMode::teleport;
    double l_threshold = 0.0;  // largest l whose optimal-n success reaches target
    int n_at_threshold = 0;    // n_c at l_threshold
    double l_reported = 0.0;   // l_threshold to two significant figures
    int n_reported = 0;        // n_c at l_reported
};

/// Bisection on l with find_nc inside; stops when the bracket is narrower
/// than rel_tol * l. nullopt when target exceeds n_max/(n_max+1) (teleport)
/// or its square (controlled sign).
std::optional<ThresholdResult> find_threshold(double target, GateMode mode, int n_max = 1000, double rel_tol = 1e-7);

double round_significant(double x, int digits);

}  // namespace loqc
