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

#ifndef LATTICEGATE_ANALYSIS_H
#define LATTICEGATE_ANALYSIS_H

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "latticegate/noise.h"
#include "latticegate/physics.h"
#include "latticegate/sequence.h"

namespace latticegate {

/// Sampled Ramsey fringe: |1> fraction against the phase of the last pi/2 pulse.
struct FringeData {
    std::vector<double> alpha;
    std::vector<double> p_one;
    std::vector<double> p_one_stderr;
    std::size_t n_atoms = 0;
    double t_hold = 0;
    uint64_t seed = 0;
};

/// p(alpha) = offset + amplitude * cos(alpha - fringe_phase), amplitude >= 0.
struct FitResult {
    double visibility = 0;  ///< amplitude / offset
    double fringe_phase = 0;
    double offset = 0;
    double amplitude = 0;
    double residual_rms = 0;
    int iterations = 0;
};

struct FitOptions {
    int max_iterations = 200;
    double degenerate_offset = 1e-6;
};

/// Levenberg-Marquardt fit of offset + amplitude * cos(x - phase), seeded from the discrete
/// Fourier coefficient at the fundamental. Throws FitError for fewer than 4 points, a fitted
/// offset <= degenerate_offset, or no convergence within max_iterations.
FitResult fit_sinusoid(std::span<const double> x, std::span<const double> y, const FitOptions &opts = {});
FitResult fit_sinusoid(const FringeData &fringe, const FitOptions &opts = {});

/// n evenly spaced phases on [0, 2 pi).
std::vector<double> uniform_alpha_grid(std::size_t n = 32);

/// Everything a scan needs besides its grid.
struct ScanSetup {
    Chain chain;
    CalibrationModel cal;
    NoiseModel noise;
    SequenceOptions sequence;
    std::size_t max_atoms = 22;
};

/// Return-variant fringe at one hold time, ensemble-averaged over noise realizations.
/// Needs at least 8 alpha points spanning at least 2 pi (end point inclusive).
FringeData ramsey_scan(const ScanSetup &setup, double t_hold, std::span<const double> alpha_grid);

struct VisibilityPoint {
    double t_hold;
    double phase;
    FitResult fit;
};

std::vector<VisibilityPoint> visibility_curve(const ScanSetup &setup, std::span<const double> t_grid,
                                              std::span<const double> alpha_grid);

/// Far-field (time-of-flight) imaging of the delocalized variant.
struct InterferogramModel {
    double wavelength = 785e-9;     ///< state-dependent lattice wavelength; sites are wavelength/2 apart
    double tof = 11e-3;             ///< s
    double envelope_width = 0;      ///< on-site wave-packet rms width; 0 selects wavelength / 8
    double envelope_amplitude = 1;
    double mass = kConstants.mass_rb87;

    void validate() const;
    double wave_packet_width() const { return envelope_width > 0 ? envelope_width : wavelength / 8; }
    /// Separation of the two wave-packet components after delocalization: two sites.
    double slit_separation() const { return wavelength; }
    /// Fringe wavenumber m d / (hbar tof) in rad/m.
    double fringe_wavenumber() const;
    /// Gaussian far-field envelope at position x (peak envelope_amplitude).
    double envelope(double x) const;
};

struct InterferencePattern {
    std::vector<double> x;
    std::vector<double> intensity;  ///< per atom, envelope included
    std::vector<double> intensity_stderr;
    double t_hold = 0;
    double fringe_wavenumber = 0;
};

/// x positions spanning `periods` fringe periods, centered on zero.
std::vector<double> default_x_grid(const InterferogramModel &model, std::size_t points = 64, double periods = 2.0);

/// State-selective far-field image of the |1> atoms after the delocalize sequence and a pi/2 readout.
InterferencePattern interference_pattern(const ScanSetup &setup, double t_hold, std::span<const double> x_grid,
                                         const InterferogramModel &model = {});

/// Fringe contrast of a pattern: divide out the envelope, then fit a sinusoid in m d x / (hbar tof).
FitResult pattern_visibility(const InterferencePattern &pattern, const InterferogramModel &model = {});

/// (max - min) / (max + min).
double contrast_minmax(std::span<const double> values);

std::vector<VisibilityPoint> interference_visibility_curve(const ScanSetup &setup, std::span<const double> t_grid,
                                                           std::span<const double> x_grid,
                                                           const InterferogramModel &model = {});

/// Strict interior local maxima of a sampled curve.
std::vector<std::size_t> local_maxima(std::span<const double> values);
std::vector<std::size_t> local_minima(std::span<const double> values);

/// t_hold_us,phase_rad,visibility,fringe_phase_rad,offset,residual_rms with 12 significant digits.
void write_visibility_csv(std::ostream &out, std::span<const VisibilityPoint> points);
/// alpha_rad,p_one,p_one_stderr
void write_fringe_csv(std::ostream &out, const FringeData &fringe);
/// x_m,intensity,intensity_stderr
void write_pattern_csv(std::ostream &out, const InterferencePattern &pattern);

}  // namespace latticegate

#endif
