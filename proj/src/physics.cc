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

#include "latticegate/physics.h"

#include <cmath>
#include <string>

#include "latticegate/errors.h"

namespace latticegate {

using std::numbers::pi;

void LatticeAxis::validate() const {
    if (!(wavelength > 0)) {
        throw DomainError("lattice wavelength must be positive");
    }
    if (!(depth_er >= 0)) {
        throw DomainError("lattice depth must be non-negative");
    }
}

double recoil_energy(double wavelength, double mass) {
    if (!(wavelength > 0) || !(mass > 0)) {
        throw DomainError("recoil_energy needs positive wavelength and mass");
    }
    double k = 2.0 * pi / wavelength;
    return kConstants.hbar * kConstants.hbar * k * k / (2.0 * mass);
}

PotentialPair potential_pair(double x, double theta, double depth, double k_x) {
    double cp = std::cos(k_x * x + theta / 2.0);
    double cm = std::cos(k_x * x - theta / 2.0);
    return {depth * cp * cp, depth * cm * cm};
}

double minima_separation(double theta, double wavelength) {
    return theta / pi * wavelength / 2.0;
}

double trap_frequency(double depth_er, double recoil) {
    if (!(depth_er >= 0)) {
        throw DomainError("trap_frequency needs a non-negative depth");
    }
    if (!(recoil > 0)) {
        throw DomainError("trap_frequency needs a positive recoil energy");
    }
    return 2.0 * std::sqrt(depth_er) * recoil / kConstants.hbar;
}

CalibrationModel calibrate_affine(std::span<const CalibrationAnchor> anchors) {
    if (anchors.size() < 2) {
        throw CalibrationError("affine calibration needs at least 2 anchors, got " +
                               std::to_string(anchors.size()));
    }
    // Centered normal equations.
    double n = static_cast<double>(anchors.size());
    double t_mean = 0, p_mean = 0;
    for (const auto &a : anchors) {
        t_mean += a.t_hold;
        p_mean += a.phase;
    }
    t_mean /= n;
    p_mean /= n;
    double stt = 0, stp = 0;
    for (const auto &a : anchors) {
        double dt = a.t_hold - t_mean;
        stt += dt * dt;
        stp += dt * (a.phase - p_mean);
    }
    if (!(stt > 0)) {
        throw CalibrationError("calibration anchors have degenerate hold times");
    }
    CalibrationModel cal;
    cal.slope = stp / stt;
    cal.offset = p_mean - cal.slope * t_mean;
    cal.anchors.assign(anchors.begin(), anchors.end());
    if (!(cal.slope > 0)) {
        throw CalibrationError("calibration slope must be positive");
    }
    return cal;
}

CalibrationModel calibrate_linear(std::span<const CalibrationAnchor> anchors) {
    double stt = 0, stp = 0;
    for (const auto &a : anchors) {
        stt += a.t_hold * a.t_hold;
        stp += a.t_hold * a.phase;
    }
    if (anchors.empty() || !(stt > 0)) {
        throw CalibrationError("linear calibration needs at least one anchor with t_hold > 0");
    }
    CalibrationModel cal;
    cal.slope = stp / stt;
    cal.offset = 0;
    cal.anchors.assign(anchors.begin(), anchors.end());
    if (!(cal.slope > 0)) {
        throw CalibrationError("calibration slope must be positive");
    }
    return cal;
}

double phase_from_hold(double t_hold, const CalibrationModel &cal) {
    if (!(t_hold >= 0)) {
        throw DomainError("hold time must be non-negative");
    }
    return cal.slope * t_hold + cal.offset;
}

CalibrationModel reference_calibration() {
    const CalibrationAnchor anchors[] = {{210e-6, pi}, {450e-6, 2 * pi}};
    return calibrate_affine(anchors);
}

}  // namespace latticegate
