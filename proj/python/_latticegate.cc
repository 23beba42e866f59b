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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>

#include "latticegate/analysis.h"
#include "latticegate/cli.h"
#include "latticegate/clifford.h"
#include "latticegate/config.h"
#include "latticegate/errors.h"
#include "latticegate/percolation.h"
#include "latticegate/physics.h"
#include "latticegate/rng.h"
#include "latticegate/statevec.h"
#include "latticegate/version.h"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace latticegate;

namespace {

py::array_t<double> to_array(const std::vector<double> &v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::object from_json(const nlohmann::json &j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

Chain make_chain(std::size_t atoms, bool ring, const std::optional<std::vector<uint8_t>> &fill_mask) {
    Chain c = Chain::filled(atoms, ring ? Boundary::kRing : Boundary::kOpen);
    if (fill_mask) {
        c.fill_mask = *fill_mask;
    }
    return c;
}

ScanSetup make_setup(std::size_t atoms, bool ring, const std::optional<std::vector<uint8_t>> &fill_mask,
                     const std::optional<NoiseModel> &noise, const std::optional<CalibrationModel> &cal, bool spin_echo,
                     double prep_axis_phase) {
    ScanSetup s;
    s.chain = make_chain(atoms, ring, fill_mask);
    s.cal = cal ? *cal : reference_calibration();
    s.noise = noise ? *noise : NoiseModel{};
    s.sequence.spin_echo = spin_echo;
    s.sequence.prep_axis_phase = prep_axis_phase;
    return s;
}

py::dict fit_dict(const FitResult &f) {
    return py::dict("visibility"_a = f.visibility, "fringe_phase"_a = f.fringe_phase, "offset"_a = f.offset,
                    "amplitude"_a = f.amplitude, "residual_rms"_a = f.residual_rms, "iterations"_a = f.iterations);
}

py::dict curve_dict(const std::vector<VisibilityPoint> &pts) {
    std::vector<double> t, phase, v, fp, off, res;
    for (const auto &p : pts) {
        t.push_back(p.t_hold);
        phase.push_back(p.phase);
        v.push_back(p.fit.visibility);
        fp.push_back(p.fit.fringe_phase);
        off.push_back(p.fit.offset);
        res.push_back(p.fit.residual_rms);
    }
    return py::dict("t_hold"_a = to_array(t), "phase"_a = to_array(phase), "visibility"_a = to_array(v),
                    "fringe_phase"_a = to_array(fp), "offset"_a = to_array(off), "residual_rms"_a = to_array(res));
}

std::vector<ShiftAxis> parse_axes(const std::string &axes) {
    std::vector<ShiftAxis> out;
    for (char c : axes) {
        out.push_back(parse_axis(std::string_view(&c, 1)));
    }
    return out;
}

std::vector<double> alpha_or_default(const std::optional<std::vector<double>> &alpha) {
    return alpha ? *alpha : uniform_alpha_grid(32);
}

}  // namespace

PYBIND11_MODULE(_latticegate, m) {
    m.doc() = "Collisional-gate entanglement in an optical lattice: exact engine, stabilizer engine, percolation.";
    m.attr("__version__") = std::string(kVersion);
    m.attr("rng_name") = std::string(kRngName);

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
    py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
    py::register_exception<EstimationError>(m, "EstimationError", PyExc_RuntimeError);

    // physics
    m.def("recoil_energy", &recoil_energy, "wavelength"_a, "mass"_a = kConstants.mass_rb87,
          "Recoil energy in J for a lattice wavelength in m.");
    m.def("trap_frequency", &trap_frequency, "depth_er"_a, "recoil"_a, "On-site trap frequency in rad/s.");
    m.def("minima_separation", &minima_separation, "theta"_a, "wavelength"_a);

    py::class_<CalibrationModel>(m, "Calibration")
        .def_readonly("slope", &CalibrationModel::slope)
        .def_readonly("offset", &CalibrationModel::offset)
        .def_property_readonly("interaction_hz", &CalibrationModel::interaction_hz)
        .def("hold_for_phase", &CalibrationModel::hold_for_phase, "phase"_a)
        .def("phase", [](const CalibrationModel &c, double t) { return phase_from_hold(t, c); }, "t_hold"_a)
        .def("__repr__", [](const CalibrationModel &c) {
            return "Calibration(slope=" + std::to_string(c.slope) + ", offset=" + std::to_string(c.offset) + ")";
        });
    m.def("reference_calibration", &reference_calibration);
    m.def(
        "calibrate",
        [](const std::vector<std::pair<double, double>> &anchors, bool through_origin) {
            std::vector<CalibrationAnchor> a;
            for (auto [t, p] : anchors) {
                a.push_back({t, p});
            }
            return through_origin ? calibrate_linear(a) : calibrate_affine(a);
        },
        "anchors"_a, "through_origin"_a = false, "Fit phi = slope * t + offset through (t_hold, phase) pairs.");

    py::class_<NoiseModel>(m, "NoiseModel")
        .def(py::init<>())
        .def_readwrite("fill_probability", &NoiseModel::fill_probability)
        .def_readwrite("pulse_area_error", &NoiseModel::pulse_area_error)
        .def_readwrite("pulse_area_jitter", &NoiseModel::pulse_area_jitter)
        .def_readwrite("dephasing_sigma", &NoiseModel::dephasing_sigma)
        .def_readwrite("dephasing_rate", &NoiseModel::dephasing_rate)
        .def_readwrite("loss_per_atom", &NoiseModel::loss_per_atom)
        .def_readwrite("ensemble_size", &NoiseModel::ensemble_size)
        .def_readwrite("seed", &NoiseModel::seed)
        .def("validate", &NoiseModel::validate);

    // exact engine
    m.def(
        "final_state",
        [](std::size_t atoms, double t_hold, double alpha, bool ring, bool spin_echo, double prep_axis_phase,
           const std::optional<CalibrationModel> &cal) {
            SequenceOptions o;
            o.spin_echo = spin_echo;
            o.prep_axis_phase = prep_axis_phase;
            auto chain = make_chain(atoms, ring, std::nullopt);
            auto state = run(build_return_sequence(chain, t_hold, alpha, o), cal ? *cal : reference_calibration());
            auto amps = state.amplitudes();
            return py::array_t<Complex>(static_cast<py::ssize_t>(amps.size()), amps.data());
        },
        "atoms"_a, "t_hold"_a, "alpha"_a, "ring"_a = false, "spin_echo"_a = true, "prep_axis_phase"_a = 0.0,
        "calibration"_a = py::none(), "Amplitudes after the return sequence; atom a is bit a of the index.");

    m.def(
        "stabilizer_check",
        [](std::size_t atoms, bool ring, const std::optional<std::vector<uint8_t>> &fill_mask, bool spin_echo) {
            auto cal = reference_calibration();
            SequenceOptions o;
            o.spin_echo = spin_echo;
            auto seq = build_return_sequence(make_chain(atoms, ring, fill_mask), cal.hold_for_phase(std::numbers::pi),
                                             0, o);
            EngineOptions eo;
            eo.stop_before_readout = true;
            return stabilizer_check(run(seq, cal, eo), seq);
        },
        "atoms"_a, "ring"_a = false, "fill_mask"_a = py::none(), "spin_echo"_a = true,
        "Cluster-generator expectations of the phi = pi state, after local corrections.");

    // analysis
    m.def(
        "fit_sinusoid",
        [](const std::vector<double> &x, const std::vector<double> &y) { return fit_dict(fit_sinusoid(x, y)); },
        "x"_a, "y"_a, "Fit offset + amplitude * cos(x - phase).");
    m.def(
        "ramsey_scan",
        [](std::size_t atoms, double t_hold, bool ring, const std::optional<std::vector<uint8_t>> &fill_mask,
           const std::optional<std::vector<double>> &alpha, const std::optional<NoiseModel> &noise,
           const std::optional<CalibrationModel> &cal, bool spin_echo, double prep_axis_phase) {
            auto setup = make_setup(atoms, ring, fill_mask, noise, cal, spin_echo, prep_axis_phase);
            auto grid = alpha_or_default(alpha);
            FringeData f;
            {
                py::gil_scoped_release release;
                f = ramsey_scan(setup, t_hold, grid);
            }
            return py::dict("alpha"_a = to_array(f.alpha), "p_one"_a = to_array(f.p_one),
                            "p_one_stderr"_a = to_array(f.p_one_stderr), "n_atoms"_a = f.n_atoms);
        },
        "atoms"_a, "t_hold"_a, "ring"_a = false, "fill_mask"_a = py::none(), "alpha"_a = py::none(),
        "noise"_a = py::none(), "calibration"_a = py::none(), "spin_echo"_a = true, "prep_axis_phase"_a = 0.0);
    m.def(
        "visibility_curve",
        [](std::size_t atoms, const std::vector<double> &t_grid, bool ring, const std::optional<NoiseModel> &noise,
           const std::optional<CalibrationModel> &cal, const std::optional<std::vector<double>> &alpha) {
            auto setup = make_setup(atoms, ring, std::nullopt, noise, cal, true, 0);
            auto grid = alpha_or_default(alpha);
            std::vector<VisibilityPoint> pts;
            {
                py::gil_scoped_release release;
                pts = visibility_curve(setup, t_grid, grid);
            }
            return curve_dict(pts);
        },
        "atoms"_a, "t_grid"_a, "ring"_a = false, "noise"_a = py::none(), "calibration"_a = py::none(),
        "alpha"_a = py::none());
    m.def(
        "interference_pattern",
        [](std::size_t atoms, double t_hold, bool ring, const std::optional<NoiseModel> &noise,
           const std::optional<CalibrationModel> &cal, std::size_t points, double tof) {
            auto setup = make_setup(atoms, ring, std::nullopt, noise, cal, true, 0);
            InterferogramModel model;
            model.tof = tof;
            auto x = default_x_grid(model, points);
            InterferencePattern p;
            FitResult fit;
            {
                py::gil_scoped_release release;
                p = interference_pattern(setup, t_hold, x, model);
                fit = pattern_visibility(p, model);
            }
            return py::dict("x"_a = to_array(p.x), "intensity"_a = to_array(p.intensity),
                            "intensity_stderr"_a = to_array(p.intensity_stderr), "fit"_a = fit_dict(fit));
        },
        "atoms"_a, "t_hold"_a, "ring"_a = false, "noise"_a = py::none(), "calibration"_a = py::none(),
        "points"_a = 64, "tof"_a = 11e-3);

    // stabilizer engine
    m.def(
        "generate_cluster",
        [](std::array<std::size_t, 3> dims, const std::string &axes, const std::optional<std::vector<uint8_t>> &fill_mask,
           bool periodic, std::size_t max_qubits) {
            SiteLattice lat;
            lat.dims = dims;
            lat.boundary = periodic ? LatticeBoundary::kPeriodic : LatticeBoundary::kOpen;
            if (fill_mask) {
                lat.occupancy = *fill_mask;
            }
            auto ax = parse_axes(axes);
            CliffordOptions opts;
            opts.max_qubits = max_qubits;
            ClusterResult res;
            bool verified;
            {
                py::gil_scoped_release release;
                res = generate_cluster(lat, ax, opts);
                verified = verify_generators(res.tableau, lat, ax);
            }
            py::list generators;
            if (res.tableau.n() <= 64) {
                for (const auto &row : res.tableau.rows()) {
                    generators.append(row.str(res.tableau.n()));
                }
            }
            return py::dict("qubits"_a = res.tableau.n(), "sites"_a = res.graph.sites, "edges"_a = res.graph.edges,
                            "component_sizes"_a = component_sizes(res.graph), "verified"_a = verified,
                            "generators"_a = generators);
        },
        "dims"_a, "axes"_a = "x", "fill_mask"_a = py::none(), "periodic"_a = false, "max_qubits"_a = 200000,
        "Graph state of the occupied sites after one CZ step per axis. Generators are listed up to 64 qubits.");

    // percolation
    m.def(
        "percolation_trial",
        [](std::array<std::size_t, 3> dims, double p, uint64_t seed) {
            auto t = run_trial(dims, p, seed, true);
            return py::dict("mask"_a = t.mask, "component_sizes"_a = t.component_sizes, "occupied"_a = t.occupied,
                            "spanning"_a = t.spanning);
        },
        "dims"_a, "p"_a, "seed"_a = 0);
    m.def(
        "estimate_threshold",
        [](int dimension, std::size_t size, std::size_t trials, double tolerance, uint64_t seed, int max_iterations) {
            ThresholdOptions o;
            o.tolerance = tolerance;
            o.seed = seed;
            o.max_iterations = max_iterations;
            ThresholdEstimate e;
            {
                py::gil_scoped_release release;
                e = estimate_threshold(dimension, size, trials, o);
            }
            return py::dict("p_c"_a = e.p_c, "stderr"_a = e.stderr_, "lo"_a = e.lo, "hi"_a = e.hi,
                            "iterations"_a = e.iterations);
        },
        "dimension"_a, "size"_a, "trials"_a, "tolerance"_a = 1e-3, "seed"_a = 0, "max_iterations"_a = 40);
    m.def(
        "cluster_size_stats",
        [](std::array<std::size_t, 3> dims, double p, const std::vector<uint64_t> &seeds) {
            ClusterStats s;
            {
                py::gil_scoped_release release;
                s = cluster_size_stats(dims, p, seeds);
            }
            return py::dict("p"_a = s.p, "trials"_a = s.trials, "spanning_probability"_a = s.spanning_probability,
                            "stderr"_a = s.stderr_, "mean_size"_a = s.mean_size, "max_size"_a = s.max_size,
                            "giant_fraction"_a = s.giant_fraction);
        },
        "dims"_a, "p"_a, "seeds"_a);

    // experiment runner
    m.def(
        "parse_config",
        [](const std::string &text, const std::optional<std::string> &command) {
            std::optional<Command> cmd;
            if (command) {
                cmd = parse_command(*command);
                if (!cmd) {
                    throw py::value_error("unknown command '" + *command + "'");
                }
            }
            auto cfg = parse_config(text, cmd);
            auto j = cfg.to_json();
            j["hash"] = cfg.hash();
            return from_json(j);
        },
        "text"_a, "command"_a = py::none(), "Validated config with defaults filled in, plus its hash.");
    m.def(
        "run_config",
        [](const std::string &text, const std::filesystem::path &out_dir, const std::optional<std::string> &command,
           const std::optional<uint64_t> &seed) {
            std::optional<Command> cmd;
            if (command) {
                cmd = parse_command(*command);
                if (!cmd) {
                    throw py::value_error("unknown command '" + *command + "'");
                }
            }
            auto cfg = parse_config(text, cmd);
            if (seed) {
                cfg.set_seed(*seed);
            }
            RunReport report;
            {
                py::gil_scoped_release release;
                report = run_experiment(cfg, out_dir);
            }
            return py::dict("files"_a = report.files, "summary"_a = from_json(report.summary));
        },
        "text"_a, "out_dir"_a, "command"_a = py::none(), "seed"_a = py::none(),
        "Run a YAML experiment and write its CSV and JSON artifacts into out_dir.");
    m.def("figures_recipe", [] { return std::string(bundled_figures_recipe()); });
}
