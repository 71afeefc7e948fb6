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

#include "loqc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loqc {

namespace {

void check_args(int n, double l) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("loss l must lie in [0, 1]");
}

double success(int n, double l, GateMode mode) {
    double ps = (l > 0.0) ? ps_teleport_closed(n, l) : ps_teleport(n, l);
    return mode == GateMode::teleport ? ps : ps * ps;
}

}  // namespace

double ps_teleport(int n, double l) {
    check_args(n, l);
    double s = 0.0;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) {
        term *= 1.0 - l;
        s += term;
    }
    return s / (n + 1.0);
}

double ps_teleport_closed(int n, double l) {
    check_args(n, l);
    if (l == 0.0) throw std::domain_error("closed form is 0/0 at l = 0; use ps_teleport");
    // 1 - (1-l)^n without cancellation for small l.
    const double one_minus_pow = -std::expm1(n * std::log1p(-l));
    return one_minus_pow * (1.0 - l) / ((1.0 + n) * l);
}

double pd_teleport(int n, double l) {
    check_args(n, l);
    if (l == 0.0) return n / (n + 1.0);
    if (l == 1.0) return 0.0;
    const double log_l = std::log(l);
    const double log_keep = std::log1p(-l);
    double total = 0.0;
    for (int i = 1; i <= n; ++i) {
        // C(j+i, j) l^j (1-l)^i accumulated in log space.
        double log_term = i * log_keep;
        double inner = std::exp(log_term);
        for (int j = 1; j <= n + 1 - i; ++j) {
            log_term += std::log(static_cast<double>(j + i) / j) + log_l;
            inner += std::exp(log_term);
        }
        total += inner;
    }
    return total / (n + 1.0);
}

double pf_teleport(int n, double l) { return analyze(n, l, GateMode::teleport).p_f; }

double ps_cz(int n, double l) {
    double p = ps_teleport(n, l);
    return p * p;
}

double pd_cz(int n, double l) {
    double p = pd_teleport(n, l);
    return p * p;
}

double pf_cz(int n, double l) { return analyze(n, l, GateMode::controlled_sign).p_f; }

std::optional<GateMode> parse_gate_mode(std::string_view name) {
    if (name == "teleport") return GateMode::teleport;
    if (name == "cz") return GateMode::controlled_sign;
    return std::nullopt;
}

std::string_view to_string(GateMode mode) { return mode == GateMode::teleport ? "teleport" : "cz"; }

TeleportAnalysis analyze(int n, double l, GateMode mode) {
    TeleportAnalysis a;
    a.n = n;
    a.l = l;
    double ps = ps_teleport(n, l);
    double pd = pd_teleport(n, l);
    if (mode == GateMode::controlled_sign) {
        ps *= ps;
        pd *= pd;
    }
    a.p_s = ps;
    a.p_d = pd;
    if (pd > 0.0) {
        a.p_f = std::max(0.0, 1.0 - ps / pd);
    } else {
        a.degenerate = true;
    }
    return a;
}

CriticalPoint find_nc(double l, GateMode mode, int n_max) {
    if (!(l > 0.0 && l <= 1.0)) throw std::invalid_argument("find_nc requires 0 < l <= 1");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    CriticalPoint cp;
    cp.n_c = 1;
    cp.p_s_max = success(1, l, mode);
    for (int n = 2; n <= n_max; ++n) {
        double p = success(n, l, mode);
        if (p > cp.p_s_max) {
            cp.p_s_max = p;
            cp.n_c = n;
        }
    }
    cp.converged = cp.n_c < n_max || n_max == 1;
    cp.p_f_at_nc = analyze(cp.n_c, l, mode).p_f;
    return cp;
}

SecondStageTradeoff second_stage_tradeoff(double p, int n) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    return {std::pow(1.0 - p, 2 * n), 1.0 - std::pow(1.0 - p, n - 1)};
}

double round_significant(double x, int digits) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(x)))));
    return std::round(x * scale) / scale;
}

std::optional<ThresholdResult> find_threshold(double target, GateMode mode, int n_max, double rel_tol) {
    if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("target must lie in (0, 1)");
    double best_lossless = n_max / (n_max + 1.0);
    if (mode == GateMode::controlled_sign) best_lossless *= best_lossless;
    if (best_lossless < target) return std::nullopt;

    auto reaches = [&](double l) { return find_nc(l, mode, n_max).p_s_max >= target; };
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < 400 && hi - lo > rel_tol * hi; ++iter) {
        double mid = 0.5 * (lo + hi);
        (reaches(mid) ? lo : hi) = mid;
    }
    if (lo == 0.0) return std::nullopt;

    ThresholdResult r;
    r.target = target;
    r.mode = mode;
    r.l_threshold = lo;
    CriticalPoint at = find_nc(lo, mode, n_max);
    if (!at.converged) return std::nullopt;
    r.n_at_threshold = at.n_c;
    r.l_reported = round_significant(lo, 2);
    r.n_reported = find_nc(r.l_reported, mode, n_max).n_c;
    return r;
}

}  // namespace loqc
