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

#include "loqc/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "loqc/analysis.hpp"
#include "loqc/detector.hpp"
#include "loqc/protocols.hpp"

namespace loqc::cli {

namespace {

using nlohmann::json;

constexpr const char* kSimulatedProtocols[] = {"ns", "cz16", "cz4", "teleport1", "teleportn", "czn"};
constexpr const char* kAnalysisSweeps[] = {"teleport-nc", "cz-nc", "pf-vs-n"};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    std::string protocol;
    std::string input;
    double l = 0.0;
    double g = 0.0;
    int n = 1;
    std::string out;
    int threads = 0;
    bool verbose = false;
    std::string l_grid = "0:0.2:21";
    std::string g_grid = "0:0.2:21";
    std::string mode = "teleport";
    double target = 0.9;
    int n_max = 1000;
};

// Config values sit between defaults and command-line flags: they are loaded
// into Settings before CLI11 parses, so any flag given afterwards wins.
void apply_config(const json& cfg, Settings& s) {
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    auto take = [&](const char* key, auto& field) {
        if (cfg.contains(key)) cfg.at(key).get_to(field);
    };
    take("protocol", s.protocol);
    take("input", s.input);
    take("l", s.l);
    take("g", s.g);
    take("n", s.n);
    take("out", s.out);
    take("threads", s.threads);
    take("verbose", s.verbose);
    take("l-grid", s.l_grid);
    take("g-grid", s.g_grid);
    take("mode", s.mode);
    take("target", s.target);
    take("n-max", s.n_max);
}

std::optional<std::string> find_config_path(int argc, const char* const* argv) {
    for (int i = 1; i < argc; ++i) {
        std::string_view a = argv[i];
        if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
        if (a.starts_with("--config=")) return std::string(a.substr(9));
    }
    return std::nullopt;
}

void validate_detector(const Settings& s) {
    if (!(s.l >= 0.0 && s.l <= 1.0)) throw UsageError("--l must lie in [0, 1]");
    if (!(s.g >= 0.0) || !std::isfinite(s.g)) throw UsageError("--g must be finite and >= 0");
}

void validate_n(const Settings& s) {
    if (s.n < 1) throw UsageError("--n must be >= 1");
}

std::string default_input(std::string_view protocol) {
    if (protocol == "ns") return "2";
    if (protocol == "teleport1" || protocol == "teleportn") return "1";
    return "11";
}

SparseKet single_rail_symbol(char c) {
    const double h = 1.0 / std::numbers::sqrt2;
    SparseKet k(1);
    switch (c) {
        case '0': k.add({0}, 1.0); break;
        case '1': k.add({1}, 1.0); break;
        case '+': k.add({0}, h); k.add({1}, h); break;
        case '-': k.add({0}, h); k.add({1}, -h); break;
        default: throw std::invalid_argument(std::string("unknown qubit symbol '") + c + "'");
    }
    return k;
}

SparseKet dual_rail_symbol(char c) {
    const double h = 1.0 / std::numbers::sqrt2;
    switch (c) {
        case '0': return dual_rail(1.0, 0.0);
        case '1': return dual_rail(0.0, 1.0);
        case '+': return dual_rail(h, h);
        case '-': return dual_rail(h, -h);
        default: throw std::invalid_argument(std::string("unknown qubit symbol '") + c + "'");
    }
}

// Ideal run of any simulated protocol, with the per-point statistics hook.
struct SimulatedProtocol {
    std::vector<const ProtocolRun*> stages;
    std::function<ProtocolStats(const DetectorModel&)> stats;
    double ideal_probability = 0.0;
    // keeps the runs alive
    std::shared_ptr<void> owner;
};

SimulatedProtocol build_protocol(const Settings& s) {
    const std::string input = s.input.empty() ? default_input(s.protocol) : s.input;
    std::vector<SparseKet> kets;
    try {
        kets = parse_input(s.protocol, input);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    SimulatedProtocol p;
    if (s.protocol == "cz4") {
        auto run = std::make_shared<CzQuarterRun>(run_cz_quarter(kets[0], kets[1]));
        p.stages = {&run->preparation, &run->teleport};
        p.stats = [run](const DetectorModel& m) { return run->composite_stats(m); };
        p.ideal_probability = run->ideal_probability();
        p.owner = run;
        return p;
    }
    std::shared_ptr<ProtocolRun> run;
    if (s.protocol == "ns") {
        run = std::make_shared<ProtocolRun>(run_ns(kets[0]));
    } else if (s.protocol == "cz16") {
        run = std::make_shared<ProtocolRun>(run_cz_1_16(kets[0], kets[1]));
    } else if (s.protocol == "teleport1") {
        run = std::make_shared<ProtocolRun>(run_teleport_basic(kets[0]));
    } else if (s.protocol == "teleportn") {
        validate_n(s);
        run = std::make_shared<ProtocolRun>(run_teleport_n(kets[0], s.n));
    } else if (s.protocol == "czn") {
        validate_n(s);
        run = std::make_shared<ProtocolRun>(run_cz_teleported(kets[0], kets[1], s.n));
    } else {
        throw UsageError("unknown protocol '" + s.protocol + "'");
    }
    p.stages = {run.get()};
    p.stats = [run](const DetectorModel& m) { return run->stats(m); };
    p.ideal_probability = run->ideal_acceptance_probability();
    p.owner = run;
    return p;
}

json stats_json(const ProtocolStats& st) {
    return {{"p_s", st.p_s}, {"p_d", st.p_d}, {"p_f", st.p_f}, {"degenerate", st.degenerate}};
}

std::string table_path_for(const std::string& report_path, const std::string& stage) {
    std::filesystem::path p(report_path);
    std::string stem = p.stem().string();
    std::string name = stem + (stage.empty() ? "" : "." + stage) + ".outcomes.csv";
    return (p.parent_path() / name).string();
}

void describe_run(const ProtocolRun& run, std::ostream& os) {
    os << "protocol " << run.name << ": register modes\n";
    for (std::size_t m = 0; m < run.mode_labels.size(); ++m) os << "  " << m << " <- " << run.mode_labels[m] << '\n';
    os << "  measured:";
    for (std::size_t m : run.measured_modes) os << ' ' << m;
    os << "\n  heralded branches:\n";
    for (const auto& b : run.accepted) {
        os << "    " << b.pattern.to_string() << " p=" << format_number(b.probability) << " output modes";
        for (std::size_t m : b.output_modes) os << ' ' << m;
        for (const auto& c : b.corrections) os << " | phase " << format_number(c.phase) << " on mode " << c.mode;
        os << '\n';
    }
}

int cmd_run(const Settings& s, std::ostream& out, std::ostream& err) {
    validate_detector(s);
    SimulatedProtocol proto = build_protocol(s);
    const DetectorModel model(s.l, s.g);
    const ProtocolStats st = proto.stats(model);

    json report = stats_json(st);
    report["protocol"] = s.protocol;
    report["input"] = s.input.empty() ? default_input(s.protocol) : s.input;
    report["l"] = s.l;
    report["g"] = s.g;
    if (s.protocol == "teleportn" || s.protocol == "czn") report["n"] = s.n;
    report["ideal_probability"] = proto.ideal_probability;
    report["outcome_table_path"] = nullptr;

    if (proto.stages.size() == 2) {
        report["stages"] = {
            {"preparation", stats_json(proto.stages[0]->stats(model))},
            {"teleport", stats_json(proto.stages[1]->stats(model))},
        };
        report["stages"]["preparation"]["ideal_probability"] = proto.stages[0]->ideal_acceptance_probability();
        report["stages"]["teleport"]["ideal_probability"] = proto.stages[1]->ideal_acceptance_probability();
    }

    if (!s.out.empty()) {
        std::vector<std::pair<std::string, const ProtocolRun*>> tables;
        if (proto.stages.size() == 2) {
            tables = {{table_path_for(s.out, "preparation"), proto.stages[0]}, {table_path_for(s.out, ""), proto.stages[1]}};
            report["preparation_outcome_table_path"] = tables[0].first;
        } else {
            tables = {{table_path_for(s.out, ""), proto.stages[0]}};
        }
        report["outcome_table_path"] = tables.back().first;
        for (const auto& [path, run] : tables) {
            std::ofstream f(path);
            if (!f) {
                err << "error: cannot write " << path << '\n';
                return kExitOutput;
            }
            run->outcome_table.write_csv(f);
        }
        std::ofstream f(s.out);
        if (!f) {
            err << "error: cannot write " << s.out << '\n';
            return kExitOutput;
        }
        f << report.dump(2) << '\n';
    }
    if (s.verbose)
        for (const ProtocolRun* r : proto.stages) describe_run(*r, err);
    out << report.dump(2) << '\n';
    return kExitOk;
}

// Evaluates rows in parallel and returns them in index order.
std::vector<std::string> parallel_rows(std::size_t count, int threads, const std::function<std::string(std::size_t)>& row) {
    std::vector<std::string> rows(count);
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(count, 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                rows[i] = row(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::vector<double> grid_or_usage(const std::string& spec, const char* flag) {
    try {
        return parse_grid(spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

int cmd_sweep(const Settings& s, std::ostream& out, std::ostream& err) {
    if (s.out.empty()) throw UsageError("sweep requires --out");
    const bool analysis = std::find(std::begin(kAnalysisSweeps), std::end(kAnalysisSweeps), s.protocol) != std::end(kAnalysisSweeps);
    if (!analysis && !is_simulated_protocol(s.protocol)) throw UsageError("unknown protocol '" + s.protocol + "'");

    std::string header;
    std::vector<std::string> rows;
    if (s.protocol == "teleport-nc" || s.protocol == "cz-nc") {
        const GateMode mode = s.protocol == "cz-nc" ? GateMode::controlled_sign : GateMode::teleport;
        const auto ls = grid_or_usage(s.l_grid, "--l-grid");
        for (double l : ls)
            if (!(l > 0.0 && l <= 1.0)) throw UsageError("n_c sweeps need l in (0, 1]");
        if (s.n_max < 1) throw UsageError("--n-max must be >= 1");
        header = "l,n_c,p_s_max,p_f,converged";
        rows = parallel_rows(ls.size(), s.threads, [&](std::size_t i) {
            CriticalPoint cp = find_nc(ls[i], mode, s.n_max);
            return format_number(ls[i]) + ',' + std::to_string(cp.n_c) + ',' + format_number(cp.p_s_max) + ',' +
                   format_number(cp.p_f_at_nc) + ',' + (cp.converged ? "1" : "0");
        });
    } else if (s.protocol == "pf-vs-n") {
        auto mode = parse_gate_mode(s.mode);
        if (!mode) throw UsageError("--mode must be teleport or cz");
        if (!(s.l > 0.0 && s.l <= 1.0)) throw UsageError("pf-vs-n needs --l in (0, 1]");
        // Up to n_c unless --n was given explicitly (n > 1).
        const int last = s.n > 1 ? s.n : find_nc(s.l, *mode, s.n_max).n_c;
        header = "l,n,p_s,p_d,p_f";
        rows = parallel_rows(static_cast<std::size_t>(last), s.threads, [&](std::size_t i) {
            TeleportAnalysis a = analyze(static_cast<int>(i) + 1, s.l, *mode);
            return format_number(s.l) + ',' + std::to_string(a.n) + ',' + format_number(a.p_s) + ',' +
                   format_number(a.p_d) + ',' + format_number(a.p_f);
        });
    } else {
        const auto ls = grid_or_usage(s.l_grid, "--l-grid");
        const auto gs = grid_or_usage(s.g_grid, "--g-grid");
        for (double l : ls)
            if (!(l >= 0.0 && l <= 1.0)) throw UsageError("--l-grid values must lie in [0, 1]");
        for (double g : gs)
            if (!(g >= 0.0)) throw UsageError("--g-grid values must be >= 0");
        SimulatedProtocol proto = build_protocol(s);
        header = "l,g,p_s,p_d,p_f";
        rows = parallel_rows(ls.size() * gs.size(), s.threads, [&](std::size_t i) {
            const double l = ls[i / gs.size()];
            const double g = gs[i % gs.size()];
            ProtocolStats st = proto.stats(DetectorModel(l, g));
            return format_number(l) + ',' + format_number(g) + ',' + format_number(st.p_s) + ',' +
                   format_number(st.p_d) + ',' + format_number(st.p_f);
        });
    }

    std::ofstream f(s.out);
    if (!f) {
        err << "error: cannot write " << s.out << '\n';
        return kExitOutput;
    }
    f << header << '\n';
    for (const auto& r : rows) f << r << '\n';
    f.flush();
    if (!f) {
        err << "error: failed writing " << s.out << '\n';
        return kExitOutput;
    }
    if (s.verbose) out << "wrote " << rows.size() << " rows to " << s.out << '\n';
    return kExitOk;
}

int cmd_threshold(const Settings& s, std::ostream& out, std::ostream& err) {
    auto mode = parse_gate_mode(s.mode);
    if (!mode) throw UsageError("--mode must be teleport or cz");
    if (!(s.target > 0.0 && s.target < 1.0)) throw UsageError("--target must lie in (0, 1)");
    if (s.n_max < 1) throw UsageError("--n-max must be >= 1");
    auto r = find_threshold(s.target, *mode, s.n_max);
    if (!r) {
        err << "error: success probability " << s.target << " is unreachable with n <= " << s.n_max << '\n';
        return kExitUnreachable;
    }
    json report = {
        {"target", r->target},
        {"mode", std::string(to_string(r->mode))},
        {"l_required", r->l_reported},
        {"n_required", r->n_reported},
        {"l_threshold", r->l_threshold},
        {"n_at_threshold", r->n_at_threshold},
    };
    if (!s.out.empty()) {
        std::ofstream f(s.out);
        if (!f) {
            err << "error: cannot write " << s.out << '\n';
            return kExitOutput;
        }
        f << report.dump(2) << '\n';
    }
    out << report.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

bool is_simulated_protocol(std::string_view protocol) {
    return std::find(std::begin(kSimulatedProtocols), std::end(kSimulatedProtocols), protocol) != std::end(kSimulatedProtocols);
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::vector<double> parse_grid(std::string_view spec) {
    auto to_double = [](std::string_view t) {
        std::string s(t);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + s + "'");
        }
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("bad number '" + s + "'");
        return v;
    };
    auto split = [](std::string_view s, char sep) {
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= s.size(); ++i) {
            if (i == s.size() || s[i] == sep) {
                parts.push_back(s.substr(start, i - start));
                start = i + 1;
            }
        }
        return parts;
    };

    if (spec.empty()) throw std::invalid_argument("empty grid");
    bool geometric = spec.starts_with("log:");
    if (geometric) spec.remove_prefix(4);
    if (spec.find(':') != std::string_view::npos) {
        auto parts = split(spec, ':');
        if (parts.size() != 3) throw std::invalid_argument("range grid needs start:stop:count");
        const double a = to_double(parts[0]);
        const double b = to_double(parts[1]);
        const double c = to_double(parts[2]);
        if (c < 1 || c != std::floor(c)) throw std::invalid_argument("grid count must be a positive integer");
        const auto count = static_cast<std::size_t>(c);
        if (geometric && !(a > 0.0 && b > 0.0)) throw std::invalid_argument("log grid bounds must be positive");
        std::vector<double> out;
        for (std::size_t i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            out.push_back(geometric ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
        }
        return out;
    }
    if (geometric) throw std::invalid_argument("log grid needs start:stop:count");
    std::vector<double> out;
    for (auto p : split(spec, ',')) out.push_back(to_double(p));
    return out;
}

std::vector<SparseKet> parse_input(std::string_view protocol, std::string_view spec) {
    if (spec.empty()) throw std::invalid_argument("empty input");
    if (protocol == "ns") {
        SparseKet k(1);
        std::size_t terms = 0;
        for (std::size_t start = 0; start <= spec.size();) {
            std::size_t end = spec.find('+', start);
            if (end == std::string_view::npos) end = spec.size();
            std::string_view tok = spec.substr(start, end - start);
            if (tok.size() != 1 || tok[0] < '0' || tok[0] > '2')
                throw std::invalid_argument("ns input terms must be photon numbers 0, 1 or 2");
            const auto basis = FockState{static_cast<Occupation>(tok[0] - '0')};
            if (k.amplitude(basis) != Complex{}) throw std::invalid_argument("repeated ns input term");
            k.add(basis, 1.0);
            ++terms;
            start = end + 1;
        }
        return {k.scaled(1.0 / std::sqrt(static_cast<double>(terms)))};
    }
    if (protocol == "teleport1" || protocol == "teleportn") {
        if (spec.size() != 1) throw std::invalid_argument("teleport input is one symbol of 0, 1, +, -");
        return {single_rail_symbol(spec[0])};
    }
    if (protocol == "cz16" || protocol == "cz4" || protocol == "czn") {
        if (spec.size() != 2) throw std::invalid_argument("two-qubit input is two symbols of 0, 1, +, -");
        return {dual_rail_symbol(spec[0]), dual_rail_symbol(spec[1])};
    }
    throw std::invalid_argument("unknown protocol '" + std::string(protocol) + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Settings s;
    try {
        if (auto cfg_path = find_config_path(argc, argv)) {
            std::ifstream f(*cfg_path);
            if (!f) throw UsageError("cannot read config file " + *cfg_path);
            apply_config(json::parse(f), s);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const json::exception& e) {
        err << "error: bad config file: " << e.what() << '\n';
        return kExitUsage;
    }

    CLI::App app{"Linear-optical quantum circuit simulator with lossy, noisy photon counters"};
    app.require_subcommand(1);
    std::string config_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON file with default values for these flags");
        sub->add_option("--out", s.out, "Output path");
        sub->add_flag("--verbose", s.verbose, "Print mode bookkeeping and progress");
    };

    auto* run_cmd = app.add_subcommand("run", "Run one protocol and report p_s, p_d, p_f");
    run_cmd->add_option("--protocol", s.protocol, "ns | cz16 | cz4 | teleport1 | teleportn | czn");
    run_cmd->add_option("--input", s.input, "Logical input, e.g. 2 (ns), 1 or + (teleport), 11 (two-qubit gates)");
    run_cmd->add_option("--l", s.l, "Detector loss probability")->capture_default_str();
    run_cmd->add_option("--g", s.g, "Mean noise counts per detector")->capture_default_str();
    run_cmd->add_option("--n", s.n, "Resource size for teleportn / czn")->capture_default_str();
    add_common(run_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "Write a CSV over a parameter grid");
    sweep_cmd->add_option("--protocol", s.protocol,
                          "Simulated protocol (l,g grid) or teleport-nc | cz-nc (l grid) | pf-vs-n (fixed l)");
    sweep_cmd->add_option("--input", s.input, "Logical input for simulated protocols");
    sweep_cmd->add_option("--l-grid", s.l_grid, "Loss grid: a,b,c | start:stop:count | log:start:stop:count")
        ->capture_default_str();
    sweep_cmd->add_option("--g-grid", s.g_grid, "Noise grid, same syntax")->capture_default_str();
    sweep_cmd->add_option("--l", s.l, "Loss for pf-vs-n");
    sweep_cmd->add_option("--n", s.n, "Resource size (teleportn / czn), or last n for pf-vs-n");
    sweep_cmd->add_option("--mode", s.mode, "teleport | cz (pf-vs-n)")->capture_default_str();
    sweep_cmd->add_option("--n-max", s.n_max, "Largest n scanned for n_c")->capture_default_str();
    sweep_cmd->add_option("--threads", s.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    add_common(sweep_cmd);

    auto* thr_cmd = app.add_subcommand("threshold", "Detector loss and resource size needed for a target success rate");
    thr_cmd->add_option("--target", s.target, "Target success probability")->capture_default_str();
    thr_cmd->add_option("--mode", s.mode, "teleport | cz")->capture_default_str();
    thr_cmd->add_option("--n-max", s.n_max, "Largest n scanned")->capture_default_str();
    add_common(thr_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        // --protocol may come from the config file, so it is checked here rather than by the parser.
        if ((*run_cmd || *sweep_cmd) && s.protocol.empty()) throw UsageError("--protocol is required");
        if (*run_cmd) return cmd_run(s, out, err);
        if (*sweep_cmd) return cmd_sweep(s, out, err);
        return cmd_threshold(s, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace loqc::cli
