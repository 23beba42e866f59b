// Copyright 2026 The latticegate Authors
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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "latticegate/analysis.h"
#include "latticegate/cli.h"
#include "latticegate/clifford.h"
#include "latticegate/config.h"
#include "latticegate/percolation.h"
#include "latticegate/statevec.h"

using namespace latticegate;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// phi(t) = slope * t with phi = pi at 210 us.
CalibrationModel linear_calibration() {
    const CalibrationAnchor a[] = {{210e-6, pi}};
    return calibrate_linear(a);
}

double ideal_visibility(const Chain &chain, double phi, const NoiseModel &noise = {}) {
    ScanSetup s;
    s.chain = chain;
    s.cal = linear_calibration();
    s.noise = noise;
    auto alpha = uniform_alpha_grid(32);
    return fit_sinusoid(ramsey_scan(s, s.cal.hold_for_phase(phi), alpha)).visibility;
}

Outcome two_atom_state() {
    double worst = 0;
    auto cal = linear_calibration();
    SequenceOptions o;
    o.prep_axis_phase = pi / 2;
    for (int k = 0; k < 32; ++k) {
        double phi = 2 * pi * k / 32;
        auto state = run(build_return_sequence(Chain::filled(2), cal.hold_for_phase(phi), pi / 2, o), cal);
        // (1 + e^{-i phi})/2 |11> + (1 - e^{-i phi})/2 |BELL>, index = s0 + 2 s1.
        Complex a = (1.0 + std::polar(1.0, -phi)) / 2.0, b = (1.0 - std::polar(1.0, -phi)) / 2.0;
        Complex ref[4] = {0.5 * b, 0.5 * b, -0.5 * b, 0.5 * b + a};
        auto amps = state.amplitudes();
        Complex overlap = 0;
        for (int i = 0; i < 4; ++i) {
            overlap += std::conj(ref[i]) * amps[i];
        }
        Complex g = overlap / std::abs(overlap);
        for (int i = 0; i < 4; ++i) {
            worst = std::max(worst, std::abs(amps[i] - g * ref[i]));
        }
    }
    return {worst < 1e-10, fmt::format("max amplitude deviation {:.2e} over 32 phi (limit 1e-10)", worst)};
}

Outcome alpha_independence() {
    double worst = 0;
    auto cal = reference_calibration();
    double t = cal.hold_for_phase(pi);
    for (auto chain : {Chain::filled(2), Chain::filled(6), Chain::filled(10, Boundary::kRing)}) {
        for (int k = 0; k < 64; ++k) {
            auto state = run(build_return_sequence(chain, t, 2 * pi * k / 64), cal);
            worst = std::max(worst, std::abs(probability_one(state) - 0.5));
        }
    }
    return {worst <= 1e-12, fmt::format("max |P1 - 1/2| {:.2e} over 64 alpha, N = 2, 6, 10 ring (limit 1e-12)", worst)};
}

Outcome visibility_law() {
    auto ring = Chain::filled(10, Boundary::kRing);
    std::vector<double> v;
    double worst = 0;
    for (int k = 0; k <= 24; ++k) {
        double phi = 4 * pi * k / 24;
        v.push_back(ideal_visibility(ring, phi));
        worst = std::max(worst, std::abs(v.back() - (1 + std::cos(phi)) / 2));
    }
    auto minima = local_minima(v);
    bool odd = minima.size() == 2 && minima[0] == 6 && minima[1] == 18;
    return {worst <= 1e-8 && odd,
            fmt::format("N=10 ring max |V - (1+cos phi)/2| {:.2e} on 25 phi in [0, 4pi] (limit 1e-8); minima at "
                        "{}",
                        worst, odd ? "pi, 3pi" : "unexpected points")};
}

Outcome figure_shapes(RunReport &figures, double &runtime) {
    auto cfg = parse_config(bundled_figures_recipe(), Command::kFigures);
    auto dir = fs::temp_directory_path() / "latticegate_acceptance" / "figures_a";
    fs::remove_all(dir);
    auto t0 = std::chrono::steady_clock::now();
    figures = run_experiment(cfg, dir);
    runtime = seconds_since(t0);
    auto vis = [&](const char *stem) { return figures.summary[stem]["fit"]["visibility"].get<double>(); };
    double v30 = vis("fig2_a"), v210 = vis("fig2_b"), v450 = vis("fig2_c");
    auto maxima = figures.summary["fig5"]["maxima_t_us"];
    bool pass = v30 >= 0.45 && v30 <= 0.55 && v210 >= 0.03 && v210 <= 0.07 && v450 >= 0.50 && v450 <= 0.60 &&
                maxima.size() == 4 && runtime < 300;
    std::string peaks;
    for (const auto &m : maxima) {
        peaks += fmt::format("{}{:.0f}", peaks.empty() ? "" : ", ", m.get<double>());
    }
    return {pass, fmt::format("V(30/210/450 us) = {:.3f} / {:.3f} / {:.3f} (bands [0.45,0.55] / [0.03,0.07] / "
                              "[0.50,0.60]); fig5 maxima at [{}] us ({} of 4); ensemble {}, {:.0f} s",
                              v30, v210, v450, peaks, maxima.size(), cfg.noise.ensemble_size, runtime)};
}

Outcome pulse_error() {
    auto ring = Chain::filled(8, Boundary::kRing);
    std::vector<double> v;
    for (double eps : {0.0, 0.02, 0.05, 0.1}) {
        NoiseModel m;
        m.pulse_area_error = eps;
        v.push_back(ideal_visibility(ring, pi, m));
    }
    bool monotone = v[0] < v[1] && v[1] < v[2] && v[2] < v[3];
    return {monotone && v[2] >= 0.01 && v[2] <= 0.04,
            fmt::format("N=8 ring, phi=pi: V(eps = 0, 0.02, 0.05, 0.1) = {:.4f}, {:.4f}, {:.4f}, {:.4f}; band at 0.05 "
                        "[0.01, 0.04]; {}",
                        v[0], v[1], v[2], v[3], monotone ? "monotone" : "NOT monotone")};
}

Outcome cluster_verification() {
    std::mt19937_64 rng(2024);
    auto cal = linear_calibration();
    EngineOptions eo;
    eo.stop_before_readout = true;
    const ShiftAxis x[] = {ShiftAxis::kX};
    double worst = 0;
    std::size_t cases = 0, group_mismatch = 0;
    for (std::size_t n = 1; n <= 14; ++n) {
        for (bool ring : {false, true}) {
            if (ring && n < 3) {
                continue;
            }
            for (int trial = 0; trial < 6; ++trial) {
                Chain chain = Chain::filled(n, ring ? Boundary::kRing : Boundary::kOpen);
                if (trial > 0) {
                    chain.fill_mask.resize(n);
                    for (auto &f : chain.fill_mask) {
                        f = rng() % 4 != 0;
                    }
                    chain.fill_mask[rng() % n] = 1;
                }
                SequenceOptions so;
                so.spin_echo = trial % 2 == 0;
                so.prep_axis_phase = (trial % 4) * pi / 2;
                auto seq = build_return_sequence(chain, cal.hold_for_phase(pi), 0, so);
                ManyBodyState pre = run(seq, cal, eo);
                for (double k : stabilizer_check(pre, seq)) {
                    worst = std::max(worst, std::abs(k - 1));
                }
                LocalCorrection::for_sequence(seq).apply(pre);

                SiteLattice lat = SiteLattice::chain(n);
                lat.boundary = ring ? LatticeBoundary::kPeriodic : LatticeBoundary::kOpen;
                lat.occupancy = chain.fill_mask;
                auto res = generate_cluster(lat, x);
                std::vector<SparsePauli> from_statevec;
                for (const auto &row : res.tableau.rows()) {
                    PauliString p;
                    p.negative = row.sign;
                    p.ops.assign(n, 'I');
                    std::string s = row.str(res.tableau.n());
                    for (std::size_t q = 0; q < res.graph.sites.size(); ++q) {
                        p.ops[res.graph.sites[q]] = s[q + 1];
                    }
                    worst = std::max(worst, std::abs(pauli_expectation(pre, p) - 1));
                }
                for (std::size_t site : res.graph.sites) {
                    auto g = cluster_generator(chain, site);
                    std::string compact(1, g.negative ? '-' : '+');
                    for (std::size_t s : res.graph.sites) {
                        compact += g.ops[s];
                    }
                    from_statevec.push_back(SparsePauli::parse(compact));
                }
                auto other = StabilizerTableau::from_generators(res.tableau.n(), from_statevec);
                group_mismatch += other.same_group(res.tableau) ? 0 : 1;
                ++cases;
            }
        }
    }

    auto t0 = std::chrono::steady_clock::now();
    auto cube = SiteLattice::cube(50);
    const ShiftAxis xyz[] = {ShiftAxis::kX, ShiftAxis::kY, ShiftAxis::kZ};
    auto big = generate_cluster(cube, xyz);
    bool big_ok = big.tableau.n() == 125000 && big.graph.component_count == 1 && verify_generators(big.tableau, cube, xyz);
    double t = seconds_since(t0);
    return {worst <= 1e-10 && group_mismatch == 0 && big_ok && t < 60,
            fmt::format("{} chains N<=14: max |<K> - 1| {:.2e} (limit 1e-10), {} group mismatches; 50^3: {} qubits, {} "
                        "component(s), verified {}, {:.1f} s (limit 60 s)",
                        cases, worst, group_mismatch, big.tableau.n(), big.graph.component_count, big_ok, t)};
}

Outcome percolation_threshold() {
    auto t0 = std::chrono::steady_clock::now();
    ThresholdOptions o;
    o.tolerance = 1e-3;
    auto est = estimate_threshold(3, 48, 400, o);
    double t = seconds_since(t0);
    return {std::abs(est.p_c - 0.312) <= 0.01 && t < 600,
            fmt::format("3D L=48, 400 trials/point: p_c = {:.4f} +- {:.4f} (target 0.312 +- 0.01), {:.0f} s", est.p_c,
                        est.stderr_, t)};
}

Outcome protocol_equivalence() {
    double worst = 0;
    std::size_t cases = 0;
    InterferogramModel model;
    auto x = default_x_grid(model, 64);
    auto alpha = uniform_alpha_grid(32);
    for (std::size_t n = 1; n <= 8; ++n) {
        for (bool ring : {false, true}) {
            if (ring && n < 3) {
                continue;
            }
            ScanSetup s;
            s.chain = Chain::filled(n, ring ? Boundary::kRing : Boundary::kOpen);
            s.cal = linear_calibration();
            for (int k = 0; k <= 12; ++k) {
                double t = s.cal.hold_for_phase(2 * pi * k / 12);
                double ramsey = fit_sinusoid(ramsey_scan(s, t, alpha)).visibility;
                double pattern = pattern_visibility(interference_pattern(s, t, x, model), model).visibility;
                worst = std::max(worst, std::abs(ramsey - pattern));
                ++cases;
            }
        }
    }
    return {worst <= 1e-8,
            fmt::format("{} (N <= 8, phi) cases: max |V_pattern - V_ramsey| {:.2e} (limit 1e-8)", cases, worst)};
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Outcome determinism(const RunReport &first_figures) {
    auto root = fs::temp_directory_path() / "latticegate_acceptance";
    std::size_t compared = 0;
    std::vector<std::string> differing;
    auto compare_dirs = [&](const fs::path &a, const fs::path &b, const std::string &label) {
        for (const auto &entry : fs::directory_iterator(a)) {
            if (entry.path().extension() != ".csv") {
                continue;
            }
            ++compared;
            auto other = b / entry.path().filename();
            if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
                differing.push_back(label + "/" + entry.path().filename().string());
            }
        }
    };

    // Every bundled test recipe through the command line, at two thread counts.
    std::size_t recipes = 0;
    for (const auto &entry : fs::directory_iterator(LATTICEGATE_TEST_DATA_DIR)) {
        if (entry.path().extension() != ".yaml") {
            continue;
        }
        ++recipes;
        auto cfg = parse_config(slurp(entry.path()));
        std::string stem = entry.path().stem().string();
        std::string cmd(command_name(cfg.command));
        for (const char *run : {"a", "b"}) {
            setenv("LATTICEGATE_THREADS", run[0] == 'a' ? "1" : "4", 1);
            auto out = root / stem / run;
            fs::remove_all(out);
            std::string cfg_path = entry.path().string(), out_path = out.string();
            const char *argv[] = {"latticegate", cmd.c_str(), "--config", cfg_path.c_str(), "--out", out_path.c_str()};
            std::ostringstream sink;
            if (cli_main(6, argv, sink, sink) != 0) {
                differing.push_back(stem + " (run failed)");
            }
        }
        compare_dirs(root / stem / "a", root / stem / "b", stem);
    }
    unsetenv("LATTICEGATE_THREADS");

    // The full figure recipe, rerun.
    auto cfg = parse_config(bundled_figures_recipe(), Command::kFigures);
    auto second = root / "figures_b";
    fs::remove_all(second);
    run_experiment(cfg, second);
    compare_dirs(first_figures.files.front().parent_path(), second, "figures");

    std::string bad;
    for (const auto &d : differing) {
        bad += " " + d;
    }
    return {differing.empty() && compared > 0,
            fmt::format("{} recipes plus the figure recipe rerun: {} CSV files compared, {} differ{}", recipes,
                        compared, differing.size(), bad)};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char *name, const std::function<Outcome()> &check) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::cout << fmt::format("{} {} {}: {}", o.pass ? "PASS" : "FAIL", id, name, o.detail) << std::endl;
    };

    RunReport figures;
    double figures_runtime = 0;
    report(1, "two-atom final state", two_atom_state);
    report(2, "alpha independence at phi=pi", alpha_independence);
    report(3, "visibility law", visibility_law);
    report(4, "figure 3/5 shape at desk scale", [&] { return figure_shapes(figures, figures_runtime); });
    report(5, "pulse-area error", pulse_error);
    report(6, "cluster verification", cluster_verification);
    report(7, "percolation threshold", percolation_threshold);
    report(8, "protocol variant equivalence", protocol_equivalence);
    report(9, "determinism", [&] {
        if (figures.files.empty()) {
            return Outcome{false, "figure recipe did not run"};
        }
        return determinism(figures);
    });
    std::cout << fmt::format("{} of 9 criteria passed", 9 - failures) << std::endl;
    return failures == 0 ? 0 : 1;
}
