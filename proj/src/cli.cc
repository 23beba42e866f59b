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

#include "latticegate/cli.h"

#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "latticegate/analysis.h"
#include "latticegate/clifford.h"
#include "latticegate/errors.h"
#include "latticegate/percolation.h"
#include "latticegate/physics.h"
#include "latticegate/rng.h"
#include "latticegate/version.h"

namespace latticegate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Files written by one run. Unless commit() is called, the destructor deletes them all.
class ArtifactSet {
  public:
    ArtifactSet(fs::path dir, const ExperimentConfig &cfg) : dir_(std::move(dir)), cfg_(cfg) {}
    ArtifactSet(const ArtifactSet &) = delete;
    ArtifactSet &operator=(const ArtifactSet &) = delete;

    ~ArtifactSet() {
        if (committed_) {
            return;
        }
        for (const auto &p : report_.files) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

    /// <stem>.csv (or the given extension) plus <stem>.json.
    void write(const std::string &stem, const std::function<void(std::ostream &)> &body, json result = json::object(),
               std::string_view ext = ".csv") {
        std::string name = stem + std::string(ext);
        write_file(dir_ / name, body);
        json side;
        side["schema"] = "latticegate-sidecar/1";
        side["artifact"] = name;
        side["command"] = command_name(cfg_.command);
        side["version"] = kVersion;
        side["rng"] = {{"name", kRngName}, {"version", kRngVersion}};
        side["seed"] = cfg_.seed;
        side["config_hash"] = cfg_.hash();
        side["config"] = cfg_.to_json();
        side["result"] = result;
        write_file(dir_ / (stem + ".json"), [&](std::ostream &out) { out << side.dump(2) << '\n'; });
        report_.summary[stem] = std::move(result);
    }

    RunReport commit() {
        committed_ = true;
        return std::move(report_);
    }

  private:
    void write_file(const fs::path &path, const std::function<void(std::ostream &)> &body) {
        // Registered before opening so a half-written file is also cleaned up.
        report_.files.push_back(path);
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
        }
        body(f);
        f.flush();
        if (!f) {
            throw std::runtime_error(fmt::format("write to {} failed", path.string()));
        }
    }

    fs::path dir_;
    const ExperimentConfig &cfg_;
    RunReport report_;
    bool committed_ = false;
};

json fit_json(const FitResult &f) {
    return {{"visibility", f.visibility}, {"fringe_phase_rad", f.fringe_phase}, {"offset", f.offset},
            {"amplitude", f.amplitude},   {"residual_rms", f.residual_rms}};
}

json fringe_result(const FringeData &fringe, const CalibrationModel &cal) {
    json r = {{"t_hold_us", fringe.t_hold * 1e6},
              {"phase_rad", phase_from_hold(fringe.t_hold, cal)},
              {"n_atoms", fringe.n_atoms}};
    r["fit"] = fit_json(fit_sinusoid(fringe));
    return r;
}

json curve_result(std::span<const VisibilityPoint> pts) {
    std::vector<double> v;
    for (const auto &p : pts) {
        v.push_back(p.fit.visibility);
    }
    auto to_us = [&](const std::vector<std::size_t> &idx) {
        auto a = json::array();
        for (auto i : idx) {
            a.push_back(pts[i].t_hold * 1e6);
        }
        return a;
    };
    return {{"points", pts.size()}, {"maxima_t_us", to_us(local_maxima(v))}, {"minima_t_us", to_us(local_minima(v))}};
}

std::string panel_name(std::string_view fig, std::size_t i) {
    return fmt::format("{}_{}", fig, static_cast<char>('a' + i));
}

void run_ramsey(const ExperimentConfig &cfg, ArtifactSet &art) {
    auto setup = cfg.scan_setup();
    auto alpha = uniform_alpha_grid(cfg.scan.alpha_points);
    auto fringe = ramsey_scan(setup, cfg.scan.t_hold(), alpha);
    art.write("ramsey", [&](std::ostream &o) { write_fringe_csv(o, fringe); }, fringe_result(fringe, setup.cal));
}

void run_visibility_scan(const ExperimentConfig &cfg, ArtifactSet &art) {
    auto alpha = uniform_alpha_grid(cfg.scan.alpha_points);
    auto pts = visibility_curve(cfg.scan_setup(), cfg.scan.t_grid(), alpha);
    art.write("visibility", [&](std::ostream &o) { write_visibility_csv(o, pts); }, curve_result(pts));
}

void run_interference(const ExperimentConfig &cfg, ArtifactSet &art) {
    auto model = cfg.interferogram();
    auto x = default_x_grid(model, cfg.imaging.x_points, cfg.imaging.periods);
    auto pattern = interference_pattern(cfg.scan_setup(), cfg.scan.t_hold(), x, model);
    json r = {{"t_hold_us", pattern.t_hold * 1e6}, {"fringe_wavenumber_per_m", pattern.fringe_wavenumber}};
    r["fit"] = fit_json(pattern_visibility(pattern, model));
    art.write("interference", [&](std::ostream &o) { write_pattern_csv(o, pattern); }, r);
}

void run_interference_scan(const ExperimentConfig &cfg, ArtifactSet &art) {
    auto model = cfg.interferogram();
    auto x = default_x_grid(model, cfg.imaging.x_points, cfg.imaging.periods);
    auto pts = interference_visibility_curve(cfg.scan_setup(), cfg.scan.t_grid(), x, model);
    art.write("interference_visibility", [&](std::ostream &o) { write_visibility_csv(o, pts); }, curve_result(pts));
}

void run_cluster(const ExperimentConfig &cfg, ArtifactSet &art) {
    const auto &c = cfg.cluster;
    SiteLattice lat;
    lat.dims = c.dims;
    lat.boundary = c.boundary;
    if (c.fill_probability < 1) {
        lat.occupancy = sample_vacancies(lat.size(), c.fill_probability, cfg.seed);
    }
    CliffordOptions opts;
    opts.max_qubits = c.max_qubits;
    auto res = generate_cluster(lat, c.axes, opts);
    if (!verify_generators(res.tableau, lat, c.axes)) {
        throw std::runtime_error("generated tableau does not match the graph-state group of its bond graph");
    }
    auto sizes = component_sizes(res.graph);
    json r = {{"qubits", res.tableau.n()},
              {"edges", res.graph.edges.size()},
              {"components", res.graph.component_count},
              {"largest_component", sizes.empty() ? 0 : sizes.front()},
              {"steps", c.axes.size()},
              {"verified", true}};
    if (c.dump_tableau) {
        // Checked before writing anything so an oversized dump leaves no partial output.
        std::string dump = dump_tableau(res.tableau, res.graph.sites);
        art.write("cluster_components", [&](std::ostream &o) { write_histogram_csv(o, sizes); }, r);
        art.write("cluster_tableau", [&](std::ostream &o) { o << dump; }, r, ".txt");
    } else {
        art.write("cluster_components", [&](std::ostream &o) { write_histogram_csv(o, sizes); }, r);
    }
}

void run_percolation(const ExperimentConfig &cfg, ArtifactSet &art) {
    const auto &pc = cfg.percolation;
    int dim = static_cast<int>(pc.dimension);
    if (!pc.p_grid.empty()) {
        std::vector<uint64_t> seeds(pc.trials);
        std::iota(seeds.begin(), seeds.end(), cfg.seed);
        std::vector<ClusterStats> rows;
        for (double p : pc.p_grid) {
            rows.push_back(cluster_size_stats(lattice_dims(dim, pc.size), p, seeds));
        }
        art.write("percolation", [&](std::ostream &o) { write_percolation_csv(o, rows); },
                  {{"dimension", pc.dimension}, {"size", pc.size}, {"trials", pc.trials}});
    }
    if (pc.estimate_threshold) {
        ThresholdOptions opts;
        opts.tolerance = pc.tolerance;
        opts.max_iterations = static_cast<int>(pc.max_iterations);
        opts.seed = cfg.seed;
        auto est = estimate_threshold(dim, pc.size, pc.trials, opts);
        json r = {{"p_c", est.p_c}, {"stderr", est.stderr_}, {"lo", est.lo}, {"hi", est.hi},
                  {"iterations", est.iterations}};
        art.write(
            "percolation_threshold",
            [&](std::ostream &o) {
                o << "dimension,size,trials,p_c,stderr,lo,hi,iterations\n";
                o << fmt::format("{},{},{},{:.12g},{:.12g},{:.12g},{:.12g},{}\n", pc.dimension, pc.size, pc.trials,
                                 est.p_c, est.stderr_, est.lo, est.hi, est.iterations);
            },
            r);
        art.write(
            "percolation_bisection",
            [&](std::ostream &o) {
                o << "p,spanning_prob,stderr\n";
                for (const auto &pt : est.evaluated) {
                    o << fmt::format("{:.12g},{:.12g},{:.12g}\n", pt.p, pt.spanning_probability, pt.stderr_);
                }
            },
            r);
    }
}

void run_calibrate(const ExperimentConfig &cfg, ArtifactSet &art) {
    auto cal = cfg.calibration.model();
    double ss = 0;
    for (const auto &a : cal.anchors) {
        double d = phase_from_hold(a.t_hold, cal) - a.phase;
        ss += d * d;
    }
    double rms = std::sqrt(ss / static_cast<double>(cal.anchors.size()));
    double pi = std::numbers::pi;
    json r = {{"slope_rad_per_s", cal.slope}, {"offset_rad", cal.offset}, {"interaction_hz", cal.interaction_hz()},
              {"residual_rms_rad", rms}};
    double er = recoil_energy(cfg.lattice.wavelength());
    r["recoil_hz"] = er / kConstants.h;
    if (cfg.lattice.depth_er > 0) {
        r["trap_frequency_hz"] = trap_frequency(cfg.lattice.depth_er, er) / (2 * pi);
    }
    art.write(
        "calibration",
        [&](std::ostream &o) {
            o << "slope_rad_per_s,offset_rad,interaction_hz,t_pi_us,t_2pi_us,residual_rms_rad\n";
            o << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", cal.slope, cal.offset,
                             cal.interaction_hz(), cal.hold_for_phase(pi) * 1e6, cal.hold_for_phase(2 * pi) * 1e6,
                             rms);
        },
        r);
}

void run_figures(const ExperimentConfig &cfg, ArtifactSet &art) {
    const auto &f = cfg.figures;
    auto fringe_holds = us_to_s(f.fringe_holds_us), fig4_holds = us_to_s(f.fig4_holds_us);
    auto setup = cfg.scan_setup();
    auto alpha = uniform_alpha_grid(cfg.scan.alpha_points);
    auto model = cfg.interferogram();
    auto x = default_x_grid(model, cfg.imaging.x_points, cfg.imaging.periods);

    for (std::size_t i = 0; i < fringe_holds.size(); ++i) {
        auto fringe = ramsey_scan(setup, fringe_holds[i], alpha);
        art.write(panel_name("fig2", i), [&](std::ostream &o) { write_fringe_csv(o, fringe); },
                  fringe_result(fringe, setup.cal));
    }

    auto fig3 = visibility_curve(setup, us_to_s(f.fig3_grid_us), alpha);
    art.write("fig3", [&](std::ostream &o) { write_visibility_csv(o, fig3); }, curve_result(fig3));

    for (std::size_t i = 0; i < fig4_holds.size(); ++i) {
        auto pattern = interference_pattern(setup, fig4_holds[i], x, model);
        json r = {{"t_hold_us", pattern.t_hold * 1e6}, {"phase_rad", phase_from_hold(pattern.t_hold, setup.cal)}};
        r["fit"] = fit_json(pattern_visibility(pattern, model));
        art.write(panel_name("fig4", i), [&](std::ostream &o) { write_pattern_csv(o, pattern); }, r);
    }

    ScanSetup long_scan = setup;
    if (f.fig5_dephasing_rate > 0) {
        long_scan.noise.dephasing_rate = f.fig5_dephasing_rate;
    }
    auto fig5 = interference_visibility_curve(long_scan, us_to_s(f.fig5_grid_us), x, model);
    art.write("fig5", [&](std::ostream &o) { write_visibility_csv(o, fig5); }, curve_result(fig5));
}

}  // namespace

RunReport run_experiment(const ExperimentConfig &cfg, const fs::path &out_dir) {
    fs::create_directories(out_dir);
    ArtifactSet art(out_dir, cfg);
    switch (cfg.command) {
    case Command::kRamsey:
        run_ramsey(cfg, art);
        break;
    case Command::kVisibilityScan:
        run_visibility_scan(cfg, art);
        break;
    case Command::kInterference:
        run_interference(cfg, art);
        break;
    case Command::kInterferenceScan:
        run_interference_scan(cfg, art);
        break;
    case Command::kCluster:
        run_cluster(cfg, art);
        break;
    case Command::kPercolation:
        run_percolation(cfg, art);
        break;
    case Command::kCalibrate:
        run_calibrate(cfg, art);
        break;
    case Command::kFigures:
        run_figures(cfg, art);
        break;
    }
    return art.commit();
}

int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"latticegate: collisional-gate entanglement in an optical lattice"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string config_path, out_dir = ".";
    uint64_t seed = 0;
    bool print_recipe = false;
    std::map<CLI::App *, Command> subs;
    const std::map<Command, std::string> help = {
        {Command::kRamsey, "Ramsey fringe at one hold time"},
        {Command::kVisibilityScan, "fringe visibility against hold time"},
        {Command::kInterference, "far-field pattern of the delocalized variant at one hold time"},
        {Command::kInterferenceScan, "pattern visibility against hold time"},
        {Command::kCluster, "stabilizer cluster state on a 1-3D lattice"},
        {Command::kPercolation, "site-percolation statistics and threshold"},
        {Command::kCalibrate, "hold-time to collisional-phase calibration"},
        {Command::kFigures, "every figure dataset from one recipe (bundled by default)"},
    };
    for (Command c : all_commands()) {
        auto *sub = app.add_subcommand(std::string(command_name(c)), help.at(c));
        auto *cfg_opt = sub->add_option("--config", config_path, "YAML experiment file");
        if (c != Command::kFigures) {
            cfg_opt->required();
        } else {
            sub->add_flag("--print-recipe", print_recipe, "print the bundled recipe and exit");
        }
        sub->add_option("--seed", seed, "master seed, overrides the config");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        subs[sub] = c;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    CLI::App *sub = app.get_subcommands().front();
    Command command = subs.at(sub);

    if (print_recipe) {
        out << bundled_figures_recipe();
        return 0;
    }

    ExperimentConfig cfg;
    try {
        std::string text;
        if (config_path.empty()) {
            text = std::string(bundled_figures_recipe());
        } else {
            std::ifstream f(config_path, std::ios::binary);
            if (!f) {
                err << "error: cannot read config " << config_path << '\n';
                return 2;
            }
            std::ostringstream buf;
            buf << f.rdbuf();
            text = buf.str();
        }
        cfg = parse_config(text, command);
    } catch (const ConfigError &e) {
        std::string where = config_path.empty() ? "bundled recipe" : config_path;
        for (const auto &i : e.issues) {
            err << where;
            if (i.line > 0) {
                err << ':' << i.line;
            }
            err << ": error: " << i.message << '\n';
        }
        return 2;
    }
    if (sub->count("--seed") > 0) {
        cfg.set_seed(seed);
    }

    try {
        auto report = run_experiment(cfg, out_dir);
        for (const auto &p : report.files) {
            out << "wrote " << p.string() << '\n';
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace latticegate
