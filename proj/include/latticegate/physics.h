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

#ifndef LATTICEGATE_PHYSICS_H
#define LATTICEGATE_PHYSICS_H

#include <numbers>
#include <span>
#include <vector>

namespace latticegate {

/// CODATA values, SI units, 9 significant digits.
struct PhysicalConstants {
    double hbar;       ///< J s
    double h;          ///< J s
    double mass_rb87;  ///< kg
};

inline constexpr PhysicalConstants kConstants{
    1.05457182e-34,
    2.0 * std::numbers::pi * 1.05457182e-34,
    1.44316090e-25,
};

/// One standing-wave axis of the lattice.
struct LatticeAxis {
    double wavelength;  ///< m
    double depth_er;    ///< potential depth in units of the recoil energy
    double waist = 0;   ///< m, informational only

    void validate() const;
};

/// Recoil energy hbar^2 k^2 / 2m with k = 2 pi / wavelength. Throws DomainError on non-positive input.
double recoil_energy(double wavelength, double mass = kConstants.mass_rb87);

struct PotentialPair {
    double plus;   ///< sigma+ lattice, seen by |0>
    double minus;  ///< sigma- lattice, seen by |1>
};

/// The two circular-polarization lattices of a lin-angle-lin standing wave at polarization angle theta.
PotentialPair potential_pair(double x, double theta, double depth, double k_x);

/// Distance between the minima of the two spin-dependent lattices: theta / pi * wavelength / 2.
double minima_separation(double theta, double wavelength);

/// Harmonic approximation to the on-site trap frequency (rad/s): 2 sqrt(s) Er / hbar for depth s Er.
double trap_frequency(double depth_er, double recoil);

struct CalibrationAnchor {
    double t_hold;  ///< s
    double phase;   ///< rad
};

/// Affine map between hold time and collisional phase, phi(t) = slope * t + offset.
struct CalibrationModel {
    double slope = 0;   ///< rad/s, equal to U01 / hbar
    double offset = 0;  ///< rad
    std::vector<CalibrationAnchor> anchors;

    /// U01 / h in Hz.
    double interaction_hz() const { return slope / (2.0 * std::numbers::pi); }
    /// Hold time at which the map reaches `phase`.
    double hold_for_phase(double phase) const { return (phase - offset) / slope; }
};

/// Least-squares affine fit through the anchors; exact for two anchors.
/// Throws CalibrationError for fewer than two anchors or degenerate hold times.
CalibrationModel calibrate_affine(std::span<const CalibrationAnchor> anchors);

/// Zero-intercept fit phi = slope * t (least squares through the origin). Needs one anchor with t > 0.
CalibrationModel calibrate_linear(std::span<const CalibrationAnchor> anchors);

/// slope * t_hold + offset. Throws DomainError for t_hold < 0.
double phase_from_hold(double t_hold, const CalibrationModel &cal);

/// The two-anchor calibration that puts phi = pi at 210 us and phi = 2 pi at 450 us.
CalibrationModel reference_calibration();

}  // namespace latticegate

#endif
