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

#ifndef LATTICEGATE_CONFIG_H
#define LATTICEGATE_CONFIG_H

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "latticegate/analysis.h"
#include "latticegate/clifford.h"
#include "latticegate/noise.h"
#include "latticegate/physics.h"
#include "latticegate/sequence.h"

namespace latticegate {

enum class Command {
    kRamsey,
    kVisibilityScan,
    kInterference,
    kInterferenceScan,
    kCluster,
    kPercolation,
    kCalibrate,
    kFigures,
};

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);
const std::vector<Command> &all_commands();

struct ConfigIssue {
    int line;  ///< 1-based, 0 when unknown
    std::string message;
};

/// Every problem found in a config file, not just the first.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(std::vector<ConfigIssue> issues);
    std::vector<ConfigIssue> issues;
};

// Fields keep the units of the file (us, nm, ms, multiples of pi) so a config written back
// out as JSON reads in to exactly the same values. Accessors convert to SI.

/// Seconds from microseconds.
std::vector<double> us_to_s(const std::vector<double> &us);

struct LatticeConfig {
    std::size_t atoms = 0;
    Boundary boundary = Boundary::kOpen;
    EdgePolicy edge_policy = EdgePolicy::kEmptyEdge;
    std::vector<uint8_t> fill_mask;
    double wavelength_nm = 785;
    double depth_er = 0;

    double wavelength() const { return wavelength_nm / 1e9; }
};

struct AnchorConfig {
    double t_hold_us;
    double phase_pi;
};

struct CalibrationConfig {
    std::vector<AnchorConfig> anchors;  ///< empty selects 210 us -> pi, 450 us -> 2 pi
    bool through_origin = false;

    CalibrationModel model() const;
};

struct ScanConfig {
    std::optional<double> t_hold_us;
    std::vector<double> t_grid_us;
    std::size_t alpha_points = 32;
    std::size_t max_atoms = 22;

    double t_hold() const { return t_hold_us.value_or(0) / 1e6; }
    std::vector<double> t_grid() const { return us_to_s(t_grid_us); }
};

struct ImagingConfig {
    double tof_ms = 11;
    double envelope_width_nm = 0;  ///< 0 selects wavelength / 8
    std::size_t x_points = 64;
    double periods = 2;
};

struct ClusterConfig {
    std::array<std::size_t, 3> dims{10, 1, 1};
    LatticeBoundary boundary = LatticeBoundary::kOpen;
    std::vector<ShiftAxis> axes{ShiftAxis::kX};
    double fill_probability = 1.0;
    bool dump_tableau = false;
    std::size_t max_qubits = 200000;
};

struct PercolationConfig {
    std::size_t dimension = 3;
    std::size_t size = 48;
    std::size_t trials = 400;
    double tolerance = 1e-3;
    std::size_t max_iterations = 40;
    bool estimate_threshold = true;
    std::vector<double> p_grid;
};

/// Hold times in us.
struct FiguresConfig {
    std::vector<double> fringe_holds_us{30, 210, 450};
    std::vector<double> fig3_grid_us;
    std::vector<double> fig4_holds_us{30, 90, 150, 210, 270, 330, 390, 450};
    std::vector<double> fig5_grid_us;
    double fig5_dephasing_rate = 0;  ///< rad/s, decay envelope of the long scan
};

/// A validated experiment definition with every default filled in.
struct ExperimentConfig {
    Command command = Command::kRamsey;
    uint64_t seed = 0;
    LatticeConfig lattice;
    CalibrationConfig calibration;
    bool spin_echo = true;
    double prep_axis_phase_pi = 0;
    NoiseModel noise;
    ScanConfig scan;
    ImagingConfig imaging;
    ClusterConfig cluster;
    PercolationConfig percolation;
    FiguresConfig figures;

    Chain chain() const;
    SequenceOptions sequence() const;
    ScanSetup scan_setup() const;
    InterferogramModel interferogram() const;
    /// Overrides the master seed everywhere it is used.
    void set_seed(uint64_t s);
    /// Canonical JSON of the effective configuration.
    nlohmann::json to_json() const;
    /// fnv1a-64 of the compact canonical JSON, as 16 hex digits.
    std::string hash() const;
};

/// Strict parse of a YAML experiment file. Unknown keys, type mismatches, missing required
/// fields and out-of-range values are all collected and thrown together as a ConfigError.
/// `command` selects which fields are required; a `command:` key in the file must agree with it.
ExperimentConfig parse_config(std::string_view text, std::optional<Command> command = std::nullopt);

uint64_t fnv1a64(std::string_view bytes);

}  // namespace latticegate

#endif
