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

#ifndef LATTICEGATE_SEQUENCE_H
#define LATTICEGATE_SEQUENCE_H

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace latticegate {

enum class Boundary { kOpen, kRing };

/// What happens when an open chain shifts a component past its last site.
enum class EdgePolicy {
    kEmptyEdge,  ///< the component moves into an empty padding site and collides with nothing
    kStrict,     ///< leaving the lattice is a validation error
};

/// Geometry of the 1D register: site count, which sites hold an atom, and the boundary.
struct Chain {
    std::size_t n_atoms = 1;
    std::vector<uint8_t> fill_mask;  ///< empty means every site is filled
    Boundary boundary = Boundary::kOpen;
    EdgePolicy edge_policy = EdgePolicy::kEmptyEdge;

    static Chain filled(std::size_t n, Boundary boundary = Boundary::kOpen);

    bool occupied(std::size_t site) const { return fill_mask.empty() || fill_mask[site] != 0; }
    std::size_t occupied_count() const;
    /// Adjacent occupied pairs (a, b) with b the right neighbour of a, ring wrap included.
    std::vector<std::pair<std::size_t, std::size_t>> bonds() const;
};

struct Rotate {
    double area;        ///< pulse area, rad
    double axis_phase;  ///< rad
};
struct Shift {
    int direction;  ///< +1 or -1
};
struct Hold {
    double duration;  ///< s
};
/// Bring every spin component back to its home site.
struct Return {};
/// Terminal marker for the delocalized variant: components stay where they are.
struct Freeze {};

using Instruction = std::variant<Rotate, Shift, Hold, Return, Freeze>;

/// True when the pulse area is nearer an odd multiple of pi than an even one, i.e. the
/// rotation exchanges the spin labels of the two wave-packet components.
bool is_spin_flip(const Rotate &r);

/// Where the two spin components of one atom sit, in lattice-site units.
///
/// The frame follows the |0> lattice: Shift(d) moves every |1> component by d sites and leaves
/// |0> components in place, so |1>_j meets |0>_{j+1} after one Shift(+1).
struct PositionTag {
    int site0;
    int site1;

    int site_of(int spin) const { return spin == 0 ? site0 : site1; }
    friend bool operator==(const PositionTag &, const PositionTag &) = default;
};

/// Two co-located spin components belonging to different atoms (atom_a < atom_b).
struct Contact {
    std::size_t atom_a;
    int spin_a;
    std::size_t atom_b;
    int spin_b;
};

class PulseSequence {
  public:
    PulseSequence(Chain chain, std::vector<Instruction> instructions);

    const Chain &chain() const { return chain_; }
    std::size_t n_atoms() const { return chain_.n_atoms; }
    const std::vector<Instruction> &instructions() const { return instructions_; }
    /// Index of the Return or Freeze instruction, or npos when absent.
    std::size_t terminal_index() const;
    std::size_t hold_count() const;
    double total_hold() const;
    bool delocalized_variant() const;

    friend bool operator==(const PulseSequence &, const PulseSequence &);

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  private:
    Chain chain_;
    std::vector<Instruction> instructions_;
};

/// Tracks position tags while a sequence executes.
class PositionTracker {
  public:
    explicit PositionTracker(const Chain &chain);

    /// Updates tags for one instruction. Rotations swap tags only when they flip the spin.
    void apply(const Instruction &instr);
    const std::vector<PositionTag> &tags() const { return tags_; }
    bool split() const;
    /// Co-located components of distinct occupied atoms under the current tags.
    std::vector<Contact> contacts() const;
    /// A tag is in bounds when it lies on the lattice, or on the two padding sites per side
    /// allowed by the empty-edge policy.
    bool in_bounds(int site) const;

  private:
    int wrap(int site) const;

    const Chain *chain_;
    std::vector<PositionTag> tags_;
};

struct SequenceOptions {
    bool spin_echo = true;       ///< mid-hold pi pulse
    double prep_axis_phase = 0;  ///< axis phase of the first pi/2 pulse
};

/// Split, collide, return, then a pi/2 pulse of phase alpha.
PulseSequence build_return_sequence(const Chain &chain, double t_hold, double alpha,
                                    const SequenceOptions &opts = {});

/// Split, collide, then delocalize further so each atom spans sites j-1 and j+1. No readout pulse.
PulseSequence build_delocalize_sequence(const Chain &chain, double t_hold, const SequenceOptions &opts = {});

enum class ViolationCode {
    kNoAtoms,
    kMaskSize,
    kRingTooSmall,
    kAreaRange,
    kNegativeHold,
    kShiftDirection,
    kMissingTerminal,
    kMultipleTerminals,
    kAfterTerminal,
    kOutOfBounds,
    kPartialRotationWhileSplit,
};

struct Violation {
    std::size_t instruction;  ///< npos for sequence-level problems
    ViolationCode code;
    std::string message;
};

/// All invariant violations, in instruction order. Empty means valid.
std::vector<Violation> validate(const PulseSequence &seq);

/// Throws ProtocolError listing every violation.
void require_valid(const PulseSequence &seq);

std::string to_text(const PulseSequence &seq);
/// Inverse of to_text. Throws ProtocolError naming the offending line.
PulseSequence sequence_from_text(std::string_view text);

}  // namespace latticegate

#endif
