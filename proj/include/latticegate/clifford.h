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

#ifndef LATTICEGATE_CLIFFORD_H
#define LATTICEGATE_CLIFFORD_H

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace latticegate {

/// 64 qubits of one Pauli string: bit q of (x, z) is the Pauli on qubit 64 * index + q,
/// with (1,0) = X, (0,1) = Z, (1,1) = Y.
struct PauliWord {
    uint32_t index;
    uint64_t x;
    uint64_t z;

    bool operator==(const PauliWord &) const = default;
};

/// Hermitian Pauli string with sign, stored as sorted non-zero words. Generator rows of a
/// cluster state touch at most seven words, so 1e5-qubit tableaus stay small.
class SparsePauli {
  public:
    bool sign = false;  ///< true for a leading minus
    std::vector<PauliWord> words;

    /// "+XZI_Y" style; '_' and 'I' are identity; a missing sign means '+'.
    static SparsePauli parse(std::string_view text);
    std::string str(std::size_t n_qubits) const;

    bool x(std::size_t q) const;
    bool z(std::size_t q) const;
    void set(std::size_t q, bool x, bool z);
    bool is_identity() const { return words.empty(); }

    /// *this = *this * rhs, with the sign updated. Returns the power of i of the product's
    /// scalar (0..3) before it is folded into the sign; odd values mean the factors anticommute
    /// and the sign is then meaningless.
    int multiply_by(const SparsePauli &rhs);
    bool commutes(const SparsePauli &other) const;
    /// Qubits with a non-identity Pauli, ascending.
    std::vector<std::size_t> support() const;

    bool operator==(const SparsePauli &) const = default;
};

/// n stabilizer generators of an n-qubit state. Gates: CZ and Z (the only ones needed for
/// graph states); the x bits are therefore frozen after construction and indexed by column.
class StabilizerTableau {
  public:
    StabilizerTableau() = default;
    /// |+>^n, generators X_q.
    static StabilizerTableau plus_state(std::size_t n);
    /// Throws std::invalid_argument if the count differs from n or a row exceeds n qubits.
    static StabilizerTableau from_generators(std::size_t n, std::vector<SparsePauli> rows);

    std::size_t n() const { return n_; }
    const std::vector<SparsePauli> &rows() const { return rows_; }

    void apply_cz(uint32_t a, uint32_t b);
    void apply_z(uint32_t q);
    void flip_sign(std::size_t row) { rows_[row].sign = !rows_[row].sign; }

    /// Reduced row-echelon form over (x_0..x_{n-1}, z_0..z_{n-1}), with signs carried through
    /// the row products. Two tableaus describe the same group iff their canonical forms match.
    std::vector<SparsePauli> canonical_form() const;
    bool same_group(const StabilizerTableau &other) const;

    /// Symplectic check over every pair of rows sharing a qubit.
    bool mutually_commuting() const;
    /// Number of independent rows (equals n for a valid tableau).
    std::size_t rank() const;

  private:
    std::size_t n_ = 0;
    std::vector<SparsePauli> rows_;
    std::vector<std::vector<uint32_t>> x_col_;  ///< rows with an x bit on each qubit
};

enum class LatticeBoundary { kOpen, kPeriodic };
enum class ShiftAxis { kX = 0, kY = 1, kZ = 2 };

std::string_view axis_name(ShiftAxis axis);
/// "x", "y", "z"; throws std::invalid_argument otherwise.
ShiftAxis parse_axis(std::string_view name);

/// Simple-cubic site lattice, x fastest: site = x + Lx * (y + Ly * z).
struct SiteLattice {
    std::array<std::size_t, 3> dims{1, 1, 1};
    std::vector<uint8_t> occupancy;  ///< empty means fully occupied
    LatticeBoundary boundary = LatticeBoundary::kOpen;

    static SiteLattice chain(std::size_t n);
    static SiteLattice cube(std::size_t l);

    std::size_t size() const { return dims[0] * dims[1] * dims[2]; }
    bool occupied(std::size_t site) const { return occupancy.empty() || occupancy[site] != 0; }
    std::size_t occupied_count() const;
    std::array<std::size_t, 3> coords(std::size_t site) const;
    /// Next site along +axis, wrapping on periodic lattices; nullopt past an open edge.
    std::optional<std::size_t> forward_neighbor(std::size_t site, ShiftAxis axis) const;
    /// Throws DomainError for zero dims or a mask of the wrong length.
    void validate() const;
};

/// Bonds executed by the collision steps, over occupied sites only.
struct ClusterGraph {
    std::vector<std::size_t> sites;                     ///< qubit q lives on lattice site sites[q]
    std::vector<std::pair<uint32_t, uint32_t>> edges;   ///< qubit pairs, in execution order
    std::vector<uint32_t> component;                    ///< label per qubit, numbered by first qubit
    std::size_t component_count = 0;
};

struct CliffordOptions {
    std::size_t max_qubits = 200000;
};

struct ClusterResult {
    StabilizerTableau tableau;
    ClusterGraph graph;
};

/// Occupied qubits start in |+>; each axis in `axes` is one collision step applying CZ to every
/// occupied nearest-neighbour pair along that axis. Throws DomainError for empty or repeated axes,
/// no occupied site, or a periodic executed axis of length 2; CapacityError above max_qubits.
ClusterResult generate_cluster(const SiteLattice &lattice, std::span<const ShiftAxis> axes,
                               const CliffordOptions &opts = {});

/// Bond graph alone (no tableau).
ClusterGraph build_cluster_graph(const SiteLattice &lattice, std::span<const ShiftAxis> axes);

/// Component sizes, descending. Sums to the number of occupied sites.
std::vector<std::size_t> component_sizes(const ClusterGraph &graph);

/// K_q = X_q prod_{r ~ q} Z_r for every qubit of the graph.
StabilizerTableau graph_state_tableau(const ClusterGraph &graph);

/// True iff `tableau` generates the graph-state group of the bonds implied by (lattice, axes).
bool verify_generators(const StabilizerTableau &tableau, const SiteLattice &lattice,
                       std::span<const ShiftAxis> axes);

/// size,count rows, ascending size.
void write_histogram_csv(std::ostream &out, std::span<const std::size_t> sizes);

/// Text form for n <= 64:
///   latticegate-tableau 1
///   qubits <n>
///   sites <s_0> ... <s_{n-1}>
///   one signed Pauli string per generator
/// Throws CapacityError for larger tableaus.
std::string dump_tableau(const StabilizerTableau &tableau, std::span<const std::size_t> sites);

}  // namespace latticegate

#endif
