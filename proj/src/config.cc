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

#include "latticegate/config.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "latticegate/errors.h"
#include "latticegate/rng.h"
#include "latticegate/version.h"

namespace latticegate {

using std::numbers::pi;

namespace {

constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::kRamsey, "ramsey"},
    {Command::kVisibilityScan, "visibility-scan"},
    {Command::kInterference, "interference"},
    {Command::kInterferenceScan, "interference-scan"},
    {Command::kCluster, "cluster"},
    {Command::kPercolation, "percolation"},
    {Command::kCalibrate, "calibrate"},
    {Command::kFigures, "figures"},
};

std::string join_issues(const std::vector<ConfigIssue> &issues) {
    std::string out = "invalid config:";
    for (const auto &i : issues) {
        out += i.line > 0 ? fmt::format("\n  line {}: {}", i.line, i.message) : fmt::format("\n  {}", i.message);
    }
    return out;
}

int line_of(const YAML::Node &n) {
    auto m = n.Mark();
    return m.is_null() ? 0 : m.line + 1;
}

std::string child_path(std::string_view parent, std::string_view key) {
    return parent.empty() ? std::string(key) : fmt::format("{}.{}", parent, key);
}

/// Walks the YAML tree, collecting issues instead of stopping at the first.
class Reader {
  public:
    std::vector<ConfigIssue> issues;

    void fail(const YAML::Node &at, std::string msg) { issues.push_back({line_of(at), std::move(msg)}); }

    /// False (with an issue) unless `n` is a map; unknown keys are reported.
    bool map(const YAML::Node &n, std::string_view path, std::initializer_list<std::string_view> keys) {
        if (!n.IsMap()) {
            fail(n, fmt::format("'{}' must be a mapping", path));
            return false;
        }
        for (const auto &kv : n) {
            auto key = kv.first.as<std::string>();
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                fail(kv.first, fmt::format("unknown key '{}'", child_path(path, key)));
            }
        }
        return true;
    }

    bool scalar(const YAML::Node &n, std::string_view path) {
        if (!n.IsScalar()) {
            fail(n, fmt::format("'{}' must be a scalar", path));
            return false;
        }
        return true;
    }

    bool number(const YAML::Node &n, std::string_view path, double &out) {
        if (!scalar(n, path)) {
            return false;
        }
        double v;
        if (!YAML::convert<double>::decode(n, v) || !std::isfinite(v)) {
            fail(n, fmt::format("'{}' must be a finite number, got '{}'", path, n.Scalar()));
            return false;
        }
        out = v;
        return true;
    }

    bool integer(const YAML::Node &n, std::string_view path, uint64_t &out) {
        if (!scalar(n, path)) {
            return false;
        }
        const std::string &s = n.Scalar();
        bool digits = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
        uint64_t v;
        if (!digits || !YAML::convert<uint64_t>::decode(n, v)) {
            fail(n, fmt::format("'{}' must be a non-negative integer, got '{}'", path, s));
            return false;
        }
        out = v;
        return true;
    }

    bool boolean(const YAML::Node &n, std::string_view path, bool &out) {
        if (!scalar(n, path)) {
            return false;
        }
        bool v;
        if (!YAML::convert<bool>::decode(n, v)) {
            fail(n, fmt::format("'{}' must be true or false, got '{}'", path, n.Scalar()));
            return false;
        }
        out = v;
        return true;
    }

    // Optional-field helpers: absent leaves `out` untouched.

    void get(const YAML::Node &parent, std::string_view parent_path, const char *key, double &out,
             double lo = -INFINITY, double hi = INFINITY, bool lo_open = false) {
        auto n = parent[key];
        if (!n) {
            return;
        }
        auto path = child_path(parent_path, key);
        double v;
        if (!number(n, path, v)) {
            return;
        }
        if (v < lo || v > hi || (lo_open && v == lo)) {
            fail(n, fmt::format("'{}' = {} is out of range {}{}, {}]", path, v, lo_open ? "(" : "[", lo, hi));
            return;
        }
        out = v;
    }

    void get(const YAML::Node &parent, std::string_view parent_path, const char *key, std::size_t &out,
             std::size_t lo = 0, std::size_t hi = SIZE_MAX) {
        auto n = parent[key];
        if (!n) {
            return;
        }
        auto path = child_path(parent_path, key);
        uint64_t v;
        if (!integer(n, path, v)) {
            return;
        }
        if (v < lo || v > hi) {
            fail(n, fmt::format("'{}' = {} is out of range [{}, {}]", path, v, lo, hi));
            return;
        }
        out = static_cast<std::size_t>(v);
    }

    void get(const YAML::Node &parent, std::string_view parent_path, const char *key, bool &out) {
        if (auto n = parent[key]) {
            boolean(n, child_path(parent_path, key), out);
        }
    }

    template <typename E>
    void choice(const YAML::Node &parent, std::string_view parent_path, const char *key, E &out,
                std::initializer_list<std::pair<std::string_view, E>> options) {
        auto n = parent[key];
        if (!n) {
            return;
        }
        auto path = child_path(parent_path, key);
        if (!scalar(n, path)) {
            return;
        }
        for (const auto &[name, value] : options) {
            if (n.Scalar() == name) {
                out = value;
                return;
            }
        }
        std::string names;
        for (const auto &o : options) {
            names += names.empty() ? "" : ", ";
            names += o.first;
        }
        fail(n, fmt::format("'{}' must be one of {}, got '{}'", path, names, n.Scalar()));
    }

    /// A list of numbers, or {start, stop, step} / {start, stop, points} with stop inclusive.
    bool grid(const YAML::Node &n, std::string_view path, double lo, double hi, std::vector<double> &out) {
        std::vector<double> values;
        if (n.IsSequence()) {
            for (const auto &item : n) {
                double v;
                if (number(item, path, v)) {
                    values.push_back(v);
                }
            }
        } else if (n.IsMap()) {
            if (!map(n, path, {"start", "stop", "step", "points"})) {
                return false;
            }
            double start = 0, stop = 0, step = 0;
            uint64_t points = 0;
            bool ok = true;
            for (const char *k : {"start", "stop"}) {
                if (!n[k]) {
                    fail(n, fmt::format("missing required field '{}'", child_path(path, k)));
                    ok = false;
                }
            }
            if (!ok || !number(n["start"], child_path(path, "start"), start) ||
                !number(n["stop"], child_path(path, "stop"), stop)) {
                return false;
            }
            if (static_cast<bool>(n["step"]) == static_cast<bool>(n["points"])) {
                fail(n, fmt::format("'{}' needs exactly one of 'step' or 'points'", path));
                return false;
            }
            if (n["step"]) {
                if (!number(n["step"], child_path(path, "step"), step)) {
                    return false;
                }
                double count = (stop - start) / step;
                if (!(step > 0) || count < -1e-9 || count > 1e7) {
                    fail(n["step"], fmt::format("'{}' does not describe a finite ascending grid", path));
                    return false;
                }
                auto m = static_cast<std::size_t>(std::floor(count + 1e-9));
                for (std::size_t i = 0; i <= m; ++i) {
                    values.push_back(start + step * static_cast<double>(i));
                }
            } else {
                if (!integer(n["points"], child_path(path, "points"), points)) {
                    return false;
                }
                if (points < 2 || points > 10000000 || !(stop > start)) {
                    fail(n["points"], fmt::format("'{}' needs points >= 2 and stop > start", path));
                    return false;
                }
                for (uint64_t i = 0; i < points; ++i) {
                    values.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1));
                }
            }
        } else {
            fail(n, fmt::format("'{}' must be a list or a {{start, stop, step|points}} mapping", path));
            return false;
        }
        if (values.empty()) {
            fail(n, fmt::format("'{}' is empty", path));
            return false;
        }
        for (double v : values) {
            if (v < lo || v > hi) {
                fail(n, fmt::format("'{}' has value {} outside [{}, {}]", path, v, lo, hi));
                return false;
            }
        }
        out = std::move(values);
        return true;
    }

    void grid(const YAML::Node &parent, std::string_view parent_path, const char *key, double lo, double hi,
              std::vector<double> &out) {
        if (auto n = parent[key]) {
            grid(n, child_path(parent_path, key), lo, hi, out);
        }
    }

    void require(const YAML::Node &parent, std::string_view parent_path, const char *key, int fallback_line) {
        if (!parent || !parent.IsMap() || !parent[key]) {
            int line = parent && parent.IsMap() ? line_of(parent) : fallback_line;
            issues.push_back({line, fmt::format("missing required field '{}'", child_path(parent_path, key))});
        }
    }
};

void read_lattice(Reader &r, const YAML::Node &n, LatticeConfig &c) {
    if (!r.map(n, "lattice", {"atoms", "boundary", "edge_policy", "fill_mask", "wavelength_nm", "depth_er"})) {
        return;
    }
    r.get(n, "lattice", "atoms", c.atoms, 1, 4096);
    r.choice(n, "lattice", "boundary", c.boundary, {{"open", Boundary::kOpen}, {"ring", Boundary::kRing}});
    r.choice(n, "lattice", "edge_policy", c.edge_policy,
             {{"empty", EdgePolicy::kEmptyEdge}, {"strict", EdgePolicy::kStrict}});
    r.get(n, "lattice", "wavelength_nm", c.wavelength_nm, 0, INFINITY, true);
    r.get(n, "lattice", "depth_er", c.depth_er, 0);
    if (auto m = n["fill_mask"]) {
        if (!m.IsSequence()) {
            r.fail(m, "'lattice.fill_mask' must be a list of 0/1");
        } else {
            c.fill_mask.clear();
            for (const auto &item : m) {
                uint64_t v;
                if (r.integer(item, "lattice.fill_mask", v)) {
                    if (v > 1) {
                        r.fail(item, "'lattice.fill_mask' entries must be 0 or 1");
                    }
                    c.fill_mask.push_back(v != 0);
                }
            }
            if (c.atoms != 0 && c.fill_mask.size() != c.atoms) {
                r.fail(m, fmt::format("'lattice.fill_mask' has {} entries for {} atoms", c.fill_mask.size(), c.atoms));
            }
        }
    }
    if (c.boundary == Boundary::kRing && c.atoms != 0 && c.atoms < 3) {
        r.fail(n, "a ring lattice needs at least 3 atoms");
    }
}

void read_calibration(Reader &r, const YAML::Node &n, CalibrationConfig &c) {
    if (!r.map(n, "calibration", {"anchors", "through_origin"})) {
        return;
    }
    r.get(n, "calibration", "through_origin", c.through_origin);
    if (auto a = n["anchors"]) {
        if (!a.IsSequence()) {
            r.fail(a, "'calibration.anchors' must be a list");
            return;
        }
        c.anchors.clear();
        for (const auto &item : a) {
            if (!r.map(item, "calibration.anchors[]", {"t_hold_us", "phase_pi"})) {
                continue;
            }
            bool ok = true;
            for (const char *k : {"t_hold_us", "phase_pi"}) {
                if (!item[k]) {
                    r.fail(item, fmt::format("missing required field 'calibration.anchors[].{}'", k));
                    ok = false;
                }
            }
            double t = -1, p = 0;
            if (!ok || !r.number(item["t_hold_us"], "calibration.anchors[].t_hold_us", t) ||
                !r.number(item["phase_pi"], "calibration.anchors[].phase_pi", p)) {
                continue;
            }
            if (t < 0) {
                r.fail(item["t_hold_us"], fmt::format("'calibration.anchors[].t_hold_us' = {} is negative", t));
                continue;
            }
            c.anchors.push_back({t, p});
        }
    }
    try {
        (void)c.model();
    } catch (const CalibrationError &e) {
        r.fail(n, e.what());
    }
}

void read_noise(Reader &r, const YAML::Node &n, NoiseModel &c) {
    if (!r.map(n, "noise", {"fill_probability", "pulse_area_error", "pulse_area_jitter", "dephasing_sigma",
                            "dephasing_rate", "loss_per_atom", "ensemble_size"})) {
        return;
    }
    r.get(n, "noise", "fill_probability", c.fill_probability, 0, 1);
    r.get(n, "noise", "pulse_area_error", c.pulse_area_error, -1, INFINITY, true);
    r.get(n, "noise", "pulse_area_jitter", c.pulse_area_jitter, 0);
    r.get(n, "noise", "dephasing_sigma", c.dephasing_sigma, 0);
    r.get(n, "noise", "dephasing_rate", c.dephasing_rate, 0);
    r.get(n, "noise", "loss_per_atom", c.loss_per_atom, 0, 1);
    r.get(n, "noise", "ensemble_size", c.ensemble_size, 1, 1000000);
}

void read_sequence(Reader &r, const YAML::Node &n, ExperimentConfig &c) {
    if (!r.map(n, "sequence", {"spin_echo", "prep_axis_phase_pi"})) {
        return;
    }
    r.get(n, "sequence", "spin_echo", c.spin_echo);
    r.get(n, "sequence", "prep_axis_phase_pi", c.prep_axis_phase_pi);
}

void read_scan(Reader &r, const YAML::Node &n, ScanConfig &c) {
    if (!r.map(n, "scan", {"t_hold_us", "t_grid_us", "alpha_points", "max_atoms"})) {
        return;
    }
    if (n["t_hold_us"]) {
        double t = -1;
        r.get(n, "scan", "t_hold_us", t, 0);
        if (t >= 0) {
            c.t_hold_us = t;
        }
    }
    r.grid(n, "scan", "t_grid_us", 0, INFINITY, c.t_grid_us);
    r.get(n, "scan", "alpha_points", c.alpha_points, 8, 100000);
    r.get(n, "scan", "max_atoms", c.max_atoms, 1, 30);
}

void read_imaging(Reader &r, const YAML::Node &n, ImagingConfig &c) {
    if (!r.map(n, "imaging", {"tof_ms", "envelope_width_nm", "x_points", "periods"})) {
        return;
    }
    r.get(n, "imaging", "tof_ms", c.tof_ms, 0, INFINITY, true);
    r.get(n, "imaging", "envelope_width_nm", c.envelope_width_nm, 0);
    r.get(n, "imaging", "x_points", c.x_points, 8, 1000000);
    r.get(n, "imaging", "periods", c.periods, 0, INFINITY, true);
}

void read_cluster(Reader &r, const YAML::Node &n, ClusterConfig &c) {
    if (!r.map(n, "cluster", {"dims", "boundary", "axes", "fill_probability", "dump_tableau", "max_qubits"})) {
        return;
    }
    if (auto d = n["dims"]) {
        if (!d.IsSequence() || d.size() < 1 || d.size() > 3) {
            r.fail(d, "'cluster.dims' must be a list of 1 to 3 positive integers");
        } else {
            c.dims = {1, 1, 1};
            for (std::size_t i = 0; i < d.size(); ++i) {
                uint64_t v;
                if (r.integer(d[i], "cluster.dims", v)) {
                    if (v < 1 || v > 100000) {
                        r.fail(d[i], fmt::format("'cluster.dims' entry {} is out of range [1, 100000]", v));
                    }
                    c.dims[i] = static_cast<std::size_t>(v);
                }
            }
        }
    }
    r.choice(n, "cluster", "boundary", c.boundary,
             {{"open", LatticeBoundary::kOpen}, {"periodic", LatticeBoundary::kPeriodic}});
    if (auto a = n["axes"]) {
        if (!a.IsSequence() || a.size() == 0) {
            r.fail(a, "'cluster.axes' must be a non-empty list drawn from x, y, z");
        } else {
            c.axes.clear();
            for (const auto &item : a) {
                if (!r.scalar(item, "cluster.axes")) {
                    continue;
                }
                try {
                    auto axis = parse_axis(item.Scalar());
                    if (std::find(c.axes.begin(), c.axes.end(), axis) != c.axes.end()) {
                        r.fail(item, fmt::format("'cluster.axes' repeats axis '{}'", item.Scalar()));
                    }
                    c.axes.push_back(axis);
                } catch (const std::invalid_argument &) {
                    r.fail(item, fmt::format("'cluster.axes' entry '{}' is not x, y or z", item.Scalar()));
                }
            }
        }
    }
    r.get(n, "cluster", "fill_probability", c.fill_probability, 0, 1);
    r.get(n, "cluster", "dump_tableau", c.dump_tableau);
    r.get(n, "cluster", "max_qubits", c.max_qubits, 1);
}

void read_percolation(Reader &r, const YAML::Node &n, PercolationConfig &c) {
    if (!r.map(n, "percolation",
               {"dimension", "size", "trials", "tolerance", "max_iterations", "estimate_threshold", "p_grid"})) {
        return;
    }
    r.get(n, "percolation", "dimension", c.dimension, 1, 3);
    r.get(n, "percolation", "size", c.size, 1, 100000);
    r.get(n, "percolation", "trials", c.trials, 1, 10000000);
    r.get(n, "percolation", "tolerance", c.tolerance, 0, 1, true);
    r.get(n, "percolation", "max_iterations", c.max_iterations, 1, 200);
    r.get(n, "percolation", "estimate_threshold", c.estimate_threshold);
    r.grid(n, "percolation", "p_grid", 0, 1, c.p_grid);
    if (c.estimate_threshold && (c.size < 16 || c.trials < 100)) {
        r.fail(n, "threshold estimation needs percolation.size >= 16 and percolation.trials >= 100");
    }
}

void read_figures(Reader &r, const YAML::Node &n, FiguresConfig &c) {
    if (!r.map(n, "figures",
               {"fringe_holds_us", "fig3_grid_us", "fig4_holds_us", "fig5_grid_us", "fig5_dephasing_rate"})) {
        return;
    }
    r.grid(n, "figures", "fringe_holds_us", 0, INFINITY, c.fringe_holds_us);
    r.grid(n, "figures", "fig3_grid_us", 0, INFINITY, c.fig3_grid_us);
    r.grid(n, "figures", "fig4_holds_us", 0, INFINITY, c.fig4_holds_us);
    r.grid(n, "figures", "fig5_grid_us", 0, INFINITY, c.fig5_grid_us);
    r.get(n, "figures", "fig5_dephasing_rate", c.fig5_dephasing_rate, 0);
    if (c.fringe_holds_us.size() > 26 || c.fig4_holds_us.size() > 26) {
        r.fail(n, "figures: at most 26 panels per figure");
    }
}

}  // namespace

std::string_view command_name(Command c) {
    for (const auto &[cmd, name] : kCommandNames) {
        if (cmd == c) {
            return name;
        }
    }
    return "?";
}

std::optional<Command> parse_command(std::string_view name) {
    for (const auto &[cmd, n] : kCommandNames) {
        if (n == name) {
            return cmd;
        }
    }
    return std::nullopt;
}

const std::vector<Command> &all_commands() {
    static const std::vector<Command> all = [] {
        std::vector<Command> v;
        for (const auto &kv : kCommandNames) {
            v.push_back(kv.first);
        }
        return v;
    }();
    return all;
}

ConfigError::ConfigError(std::vector<ConfigIssue> list)
    : std::invalid_argument(join_issues(list)), issues(std::move(list)) {}

std::vector<double> us_to_s(const std::vector<double> &us) {
    std::vector<double> s;
    for (double t : us) {
        s.push_back(t / 1e6);
    }
    return s;
}

CalibrationModel CalibrationConfig::model() const {
    if (anchors.empty()) {
        return reference_calibration();
    }
    std::vector<CalibrationAnchor> si;
    for (const auto &a : anchors) {
        si.push_back({a.t_hold_us / 1e6, a.phase_pi * pi});
    }
    return through_origin ? calibrate_linear(si) : calibrate_affine(si);
}

Chain ExperimentConfig::chain() const {
    Chain c = Chain::filled(lattice.atoms, lattice.boundary);
    c.fill_mask = lattice.fill_mask;
    c.edge_policy = lattice.edge_policy;
    return c;
}

SequenceOptions ExperimentConfig::sequence() const {
    SequenceOptions o;
    o.spin_echo = spin_echo;
    o.prep_axis_phase = prep_axis_phase_pi * pi;
    return o;
}

ScanSetup ExperimentConfig::scan_setup() const {
    ScanSetup s;
    s.chain = chain();
    s.cal = calibration.model();
    s.noise = noise;
    s.sequence = sequence();
    s.max_atoms = scan.max_atoms;
    return s;
}

InterferogramModel ExperimentConfig::interferogram() const {
    InterferogramModel m;
    m.wavelength = lattice.wavelength();
    m.tof = imaging.tof_ms / 1e3;
    m.envelope_width = imaging.envelope_width_nm / 1e9;
    return m;
}

void ExperimentConfig::set_seed(uint64_t s) {
    seed = s;
    noise.seed = s;
}

nlohmann::json ExperimentConfig::to_json() const {
    using nlohmann::json;
    // Only set fields are written, so the output parses back under the same strict rules.
    auto put_list = [](json &obj, const char *key, const auto &values) {
        if (!values.empty()) {
            obj[key] = values;
        }
    };
    json j;
    j["command"] = command_name(command);
    j["seed"] = seed;
    json lat = {
        {"boundary", lattice.boundary == Boundary::kRing ? "ring" : "open"},
        {"edge_policy", lattice.edge_policy == EdgePolicy::kStrict ? "strict" : "empty"},
        {"wavelength_nm", lattice.wavelength_nm},
        {"depth_er", lattice.depth_er},
    };
    if (lattice.atoms > 0) {
        lat["atoms"] = lattice.atoms;
    }
    put_list(lat, "fill_mask", lattice.fill_mask);
    j["lattice"] = lat;
    json cal = {{"through_origin", calibration.through_origin}};
    if (!calibration.anchors.empty()) {
        auto anchors = json::array();
        for (const auto &a : calibration.anchors) {
            anchors.push_back({{"t_hold_us", a.t_hold_us}, {"phase_pi", a.phase_pi}});
        }
        cal["anchors"] = anchors;
    }
    j["calibration"] = cal;
    j["sequence"] = {{"spin_echo", spin_echo}, {"prep_axis_phase_pi", prep_axis_phase_pi}};
    j["noise"] = {
        {"fill_probability", noise.fill_probability}, {"pulse_area_error", noise.pulse_area_error},
        {"pulse_area_jitter", noise.pulse_area_jitter}, {"dephasing_sigma", noise.dephasing_sigma},
        {"dephasing_rate", noise.dephasing_rate},     {"loss_per_atom", noise.loss_per_atom},
        {"ensemble_size", noise.ensemble_size},
    };
    json sc = {{"alpha_points", scan.alpha_points}, {"max_atoms", scan.max_atoms}};
    if (scan.t_hold_us) {
        sc["t_hold_us"] = *scan.t_hold_us;
    }
    put_list(sc, "t_grid_us", scan.t_grid_us);
    j["scan"] = sc;
    j["imaging"] = {
        {"tof_ms", imaging.tof_ms},
        {"envelope_width_nm", imaging.envelope_width_nm},
        {"x_points", imaging.x_points},
        {"periods", imaging.periods},
    };
    auto axes = json::array();
    for (auto a : cluster.axes) {
        axes.push_back(axis_name(a));
    }
    j["cluster"] = {
        {"dims", cluster.dims},
        {"boundary", cluster.boundary == LatticeBoundary::kPeriodic ? "periodic" : "open"},
        {"axes", axes},
        {"fill_probability", cluster.fill_probability},
        {"dump_tableau", cluster.dump_tableau},
        {"max_qubits", cluster.max_qubits},
    };
    json perc = {
        {"dimension", percolation.dimension},
        {"size", percolation.size},
        {"trials", percolation.trials},
        {"tolerance", percolation.tolerance},
        {"max_iterations", percolation.max_iterations},
        {"estimate_threshold", percolation.estimate_threshold},
    };
    put_list(perc, "p_grid", percolation.p_grid);
    j["percolation"] = perc;
    json fig = {{"fig5_dephasing_rate", figures.fig5_dephasing_rate}};
    put_list(fig, "fringe_holds_us", figures.fringe_holds_us);
    put_list(fig, "fig3_grid_us", figures.fig3_grid_us);
    put_list(fig, "fig4_holds_us", figures.fig4_holds_us);
    put_list(fig, "fig5_grid_us", figures.fig5_grid_us);
    j["figures"] = fig;
    return j;
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string ExperimentConfig::hash() const {
    return fmt::format("{:016x}", fnv1a64(to_json().dump()));
}

ExperimentConfig parse_config(std::string_view text, std::optional<Command> command) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception &e) {
        throw ConfigError({{e.mark.is_null() ? 0 : e.mark.line + 1, e.msg}});
    }
    Reader r;
    ExperimentConfig cfg;
    if (!root || root.IsNull()) {
        root = YAML::Node(YAML::NodeType::Map);
    }
    if (!r.map(root, "",
               {"command", "seed", "lattice", "calibration", "sequence", "noise", "scan", "imaging", "cluster",
                "percolation", "figures"})) {
        throw ConfigError(std::move(r.issues));
    }

    if (auto c = root["command"]) {
        std::optional<Command> named;
        if (r.scalar(c, "command")) {
            named = parse_command(c.Scalar());
            if (!named) {
                r.fail(c, fmt::format("unknown command '{}'", c.Scalar()));
            } else if (command && *named != *command) {
                r.fail(c, fmt::format("config is for '{}' but '{}' was requested", c.Scalar(), command_name(*command)));
            }
        }
        if (named && !command) {
            command = named;
        }
    }
    if (!command) {
        r.issues.push_back({0, "no command given"});
        throw ConfigError(std::move(r.issues));
    }
    cfg.command = *command;

    if (auto s = root["seed"]) {
        uint64_t v;
        if (r.integer(s, "seed", v)) {
            cfg.seed = v;
        }
    }
    if (auto n = root["lattice"]) read_lattice(r, n, cfg.lattice);
    if (auto n = root["calibration"]) read_calibration(r, n, cfg.calibration);
    if (auto n = root["sequence"]) read_sequence(r, n, cfg);
    if (auto n = root["noise"]) read_noise(r, n, cfg.noise);
    if (auto n = root["scan"]) read_scan(r, n, cfg.scan);
    if (auto n = root["imaging"]) read_imaging(r, n, cfg.imaging);
    if (auto n = root["cluster"]) read_cluster(r, n, cfg.cluster);
    if (auto n = root["percolation"]) read_percolation(r, n, cfg.percolation);
    if (auto n = root["figures"]) read_figures(r, n, cfg.figures);
    cfg.set_seed(cfg.seed);

    // Required fields depend on the command.
    const int top = 1;
    switch (cfg.command) {
    case Command::kRamsey:
    case Command::kInterference:
        r.require(root["lattice"], "lattice", "atoms", top);
        r.require(root["scan"], "scan", "t_hold_us", top);
        break;
    case Command::kVisibilityScan:
    case Command::kInterferenceScan:
        r.require(root["lattice"], "lattice", "atoms", top);
        r.require(root["scan"], "scan", "t_grid_us", top);
        break;
    case Command::kCluster:
        r.require(root["cluster"], "cluster", "dims", top);
        break;
    case Command::kPercolation:
        r.require(root["percolation"], "percolation", "size", top);
        if (!cfg.percolation.estimate_threshold) {
            r.require(root["percolation"], "percolation", "p_grid", top);
        }
        break;
    case Command::kCalibrate:
        r.require(root["calibration"], "calibration", "anchors", top);
        break;
    case Command::kFigures:
        r.require(root["lattice"], "lattice", "atoms", top);
        r.require(root["figures"], "figures", "fig3_grid_us", top);
        r.require(root["figures"], "figures", "fig5_grid_us", top);
        break;
    }
    if (!r.issues.empty()) {
        std::stable_sort(r.issues.begin(), r.issues.end(),
                         [](const ConfigIssue &a, const ConfigIssue &b) { return a.line < b.line; });
        throw ConfigError(std::move(r.issues));
    }
    return cfg;
}

}  // namespace latticegate
