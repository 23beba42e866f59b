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

#ifndef LATTICEGATE_STATEVEC_H
#define LATTICEGATE_STATEVEC_H

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latticegate/physics.h"
#include "latticegate/sequence.h"

namespace latticegate {

using Complex = std::complex<double>;

/// R(area, phase) = [[cos(a/2), -i e^{-i phase} sin(a/2)], [-i e^{i phase} sin(a/2), cos(a/2)]].
Eigen::Matrix2cd rotation_matrix(double area, double axis_phase);

/// Diagonal phase e^{-i phase} on one spin sector (spin_a, spin_b) of two atoms.
struct CollisionGate {
    std::size_t atom_a;
    std::size_t atom_b;
    int spin_a;
    int spin_b;
    double phase;
};

/// Exact state of N spin-1/2 atoms. Site a is bit a of the amplitude index; empty sites stay in |0>
/// and are skipped by every operation.
class ManyBodyState {
  public:
    explicit ManyBodyState(Chain chain);

    std::size_t n_atoms() const { return chain_.n_atoms; }
    const Chain &chain() const { return chain_; }
    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> mutable_amplitudes() { return amps_; }
    const std::vector<PositionTag> &tags() const { return tags_; }
    void set_tags(std::vector<PositionTag> tags) { tags_ = std::move(tags); }

    void apply_single(std::size_t site, const Eigen::Matrix2cd &u);
    void apply_rotation(std::size_t site, double area, double axis_phase) {
        apply_single(site, rotation_matrix(area, axis_phase));
    }
    /// diag(e^{-i phase/2}, e^{i phase/2}).
    void apply_z_phase(std::size_t site, double phase);
    /// Applies a set of collision gates that share one phase in a single pass.
    void apply_collisions(std::span<const CollisionGate> gates);

    double norm_squared() const;

  private:
    Chain chain_;
    std::vector<Complex> amps_;
    std::vector<PositionTag> tags_;
};

struct EngineOptions {
    std::size_t max_atoms = 22;
    double norm_tolerance = 1e-10;
    /// Per-site Z phase inserted just before the first rotation after the terminal instruction
    /// (or at the end when there is none). Empty means no extra phase.
    std::vector<double> pre_readout_phases;
    /// Stop at the terminal instruction, leaving the readout rotations unapplied.
    bool stop_before_readout = false;
};

/// Executes a validated sequence. Each Hold applies the collision gate on every pair of
/// co-located components with phase slope * duration + offset / hold_count, so the whole
/// sequence accrues phase_from_hold(total_hold) on each bond.
/// Throws ProtocolError for invalid sequences and CapacityError above max_atoms.
ManyBodyState run(const PulseSequence &seq, const CalibrationModel &cal, const EngineOptions &opts = {});

/// Per-site probability of |1>; zero on empty sites.
std::vector<double> probability_one_per_atom(const ManyBodyState &state);

/// Mean |1> probability over occupied sites.
double probability_one(const ManyBodyState &state);

/// Fraction of |1> outcomes over `shots` projective measurements of every occupied atom.
double sample_probability_one(const ManyBodyState &state, std::size_t shots, uint64_t seed);

/// Partial trace onto `atoms` (1 or 2 sites). Bit j of the reduced index is atoms[j].
/// Throws std::out_of_range for bad indices.
Eigen::MatrixXcd reduced_density(const ManyBodyState &state, std::span<const std::size_t> atoms);

/// Von Neumann entropy in bits of the subsystem `part`; eigenvalues below floor count as zero.
double entanglement_entropy(const ManyBodyState &state, std::span<const std::size_t> part,
                            double eigenvalue_floor = 1e-12);

/// A Pauli product over the sites of a state, e.g. "+XZIZ" (site 0 first).
struct PauliString {
    bool negative = false;
    std::string ops;

    static PauliString parse(std::string_view text);
    std::string str() const;
};

double pauli_expectation(const ManyBodyState &state, const PauliString &p);

/// Single-site unitaries that map the phi = pi output of a standard sequence onto the canonical
/// graph state prod CZ |+...+>.
///
/// Each collision bond contributes CZ times Z on its left atom; the prep pulse R(pi/2, p) gives
/// P(p - pi/2)|+>; every echo flip contributes X. Undoing these in reverse order:
/// V = Z^{left atoms} * P(pi/2 - p)^{all} * X^{echo parity}.
struct LocalCorrection {
    bool flip = false;                ///< apply X first
    double phase_gate = 0;            ///< then diag(1, e^{i phase_gate})
    std::vector<uint8_t> z_on_site;   ///< then Z where set

    static LocalCorrection for_sequence(const PulseSequence &seq);
    void apply(ManyBodyState &state) const;
};

/// Graph-state generator K_a = X_a prod_{b in nbr(a)} Z_b for the bond graph of a chain.
PauliString cluster_generator(const Chain &chain, std::size_t site);

/// <K_a> for every occupied site after applying LocalCorrection::for_sequence to a pre-readout state.
std::vector<double> stabilizer_check(const ManyBodyState &pre_readout, const PulseSequence &seq);

/// Text dump: "index re im" per line with 12 significant digits.
std::string dump_state(const ManyBodyState &state);

}  // namespace latticegate

#endif
