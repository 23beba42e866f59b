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

#include "latticegate/clifford.h"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <fmt/format.h>

#include "latticegate/errors.h"
#include "latticegate/union_find.h"

namespace latticegate {

namespace {

constexpr uint32_t kNoQubit = UINT32_MAX;

template <typename Words>
auto find_word(Words &words, uint32_t index) {
    return std::lower_bound(words.begin(), words.end(), index,
                            [](const PauliWord &w, uint32_t i) { return w.index < i; });
}

PauliWord word_at(const SparsePauli &p, uint32_t index) {
    auto it = find_word(p.words, index);
    if (it != p.words.end() && it->index == index) {
        return *it;
    }
    return {index, 0, 0};
}

}  // namespace

SparsePauli SparsePauli::parse(std::string_view text) {
    SparsePauli p;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        p.sign = text.front() == '-';
        text.remove_prefix(1);
    }
    for (std::size_t q = 0; q < text.size(); ++q) {
        switch (text[q]) {
        case 'I':
        case '_':
            break;
        case 'X':
            p.set(q, true, false);
            break;
        case 'Y':
            p.set(q, true, true);
            break;
        case 'Z':
            p.set(q, false, true);
            break;
        default:
            throw std::invalid_argument(fmt::format("bad Pauli character '{}' in '{}'", text[q], text));
        }
    }
    return p;
}

std::string SparsePauli::str(std::size_t n_qubits) const {
    std::string s(n_qubits + 1, 'I');
    s[0] = sign ? '-' : '+';
    for (const auto &w : words) {
        for (uint64_t m = w.x | w.z; m; m &= m - 1) {
            int b = std::countr_zero(m);
            std::size_t q = std::size_t{w.index} * 64 + b;
            if (q >= n_qubits) {
                throw std::invalid_argument("Pauli string has support beyond the qubit count");
            }
            bool xb = (w.x >> b) & 1, zb = (w.z >> b) & 1;
            s[q + 1] = xb ? (zb ? 'Y' : 'X') : 'Z';
        }
    }
    return s;
}

bool SparsePauli::x(std::size_t q) const {
    return (word_at(*this, static_cast<uint32_t>(q / 64)).x >> (q % 64)) & 1;
}

bool SparsePauli::z(std::size_t q) const {
    return (word_at(*this, static_cast<uint32_t>(q / 64)).z >> (q % 64)) & 1;
}

void SparsePauli::set(std::size_t q, bool xb, bool zb) {
    auto index = static_cast<uint32_t>(q / 64);
    uint64_t bit = uint64_t{1} << (q % 64);
    auto it = find_word(words, index);
    if (it == words.end() || it->index != index) {
        if (!xb && !zb) {
            return;
        }
        it = words.insert(it, PauliWord{index, 0, 0});
    }
    it->x = xb ? (it->x | bit) : (it->x & ~bit);
    it->z = zb ? (it->z | bit) : (it->z & ~bit);
    if (!it->x && !it->z) {
        words.erase(it);
    }
}

int SparsePauli::multiply_by(const SparsePauli &rhs) {
    // Per-bit mod-4 counters of the i factors picked up by anticommuting positions.
    uint64_t cnt1 = 0, cnt2 = 0;
    int log_i = 0;
    auto step = [&](uint64_t &x1, uint64_t &z1, uint64_t x2, uint64_t z2) {
        uint64_t old_x1 = x1, old_z1 = z1;
        x1 ^= x2;
        z1 ^= z2;
        uint64_t x1z2 = old_x1 & z2;
        uint64_t anti = (x2 & old_z1) ^ x1z2;
        cnt2 ^= (cnt1 ^ x1 ^ z1 ^ x1z2) & anti;
        cnt1 ^= anti;
    };
    auto flush = [&] {
        log_i += std::popcount(cnt1) + 2 * std::popcount(cnt2);
        cnt1 = cnt2 = 0;
    };

    std::vector<PauliWord> out;
    out.reserve(words.size() + rhs.words.size());
    auto a = words.begin();
    auto b = rhs.words.begin();
    while (a != words.end() || b != rhs.words.end()) {
        PauliWord w;
        if (b == rhs.words.end() || (a != words.end() && a->index < b->index)) {
            w = *a++;
        } else if (a == words.end() || b->index < a->index) {
            w = {b->index, 0, 0};
            step(w.x, w.z, b->x, b->z);
            ++b;
        } else {
            w = *a++;
            step(w.x, w.z, b->x, b->z);
            ++b;
        }
        flush();
        if (w.x || w.z) {
            out.push_back(w);
        }
    }
    words = std::move(out);
    log_i = (log_i + 2 * (int{sign} + int{rhs.sign})) & 3;
    sign = (log_i & 2) != 0;
    return log_i;
}

bool SparsePauli::commutes(const SparsePauli &other) const {
    int parity = 0;
    auto a = words.begin();
    auto b = other.words.begin();
    while (a != words.end() && b != other.words.end()) {
        if (a->index < b->index) {
            ++a;
        } else if (b->index < a->index) {
            ++b;
        } else {
            parity ^= std::popcount((a->x & b->z) ^ (a->z & b->x)) & 1;
            ++a;
            ++b;
        }
    }
    return parity == 0;
}

std::vector<std::size_t> SparsePauli::support() const {
    std::vector<std::size_t> out;
    for (const auto &w : words) {
        for (uint64_t m = w.x | w.z; m; m &= m - 1) {
            out.push_back(std::size_t{w.index} * 64 + std::countr_zero(m));
        }
    }
    return out;
}

StabilizerTableau StabilizerTableau::plus_state(std::size_t n) {
    std::vector<SparsePauli> rows(n);
    for (std::size_t q = 0; q < n; ++q) {
        rows[q].set(q, true, false);
    }
    return from_generators(n, std::move(rows));
}

StabilizerTableau StabilizerTableau::from_generators(std::size_t n, std::vector<SparsePauli> rows) {
    if (rows.size() != n) {
        throw std::invalid_argument(fmt::format("tableau on {} qubits needs {} generators, got {}", n, n, rows.size()));
    }
    StabilizerTableau t;
    t.n_ = n;
    t.x_col_.assign(n, {});
    for (std::size_t r = 0; r < n; ++r) {
        for (const auto &w : rows[r].words) {
            if (std::size_t{w.index} * 64 + (63 - std::countl_zero(w.x | w.z)) >= n) {
                throw std::invalid_argument(fmt::format("generator {} has support beyond {} qubits", r, n));
            }
            for (uint64_t m = w.x; m; m &= m - 1) {
                t.x_col_[std::size_t{w.index} * 64 + std::countr_zero(m)].push_back(static_cast<uint32_t>(r));
            }
        }
    }
    t.rows_ = std::move(rows);
    return t;
}

void StabilizerTableau::apply_cz(uint32_t a, uint32_t b) {
    if (a >= n_ || b >= n_ || a == b) {
        throw std::invalid_argument(fmt::format("bad CZ pair ({}, {}) on {} qubits", a, b, n_));
    }
    auto update = [&](uint32_t r) {
        SparsePauli &row = rows_[r];
        bool xa = row.x(a), xb = row.x(b), za = row.z(a), zb = row.z(b);
        row.sign ^= xa && xb && (za != zb);
        row.set(a, xa, za ^ xb);
        row.set(b, xb, zb ^ xa);
    };
    for (uint32_t r : x_col_[a]) {
        update(r);
    }
    for (uint32_t r : x_col_[b]) {
        if (!rows_[r].x(a)) {  // rows with both bits were handled above
            update(r);
        }
    }
}

void StabilizerTableau::apply_z(uint32_t q) {
    if (q >= n_) {
        throw std::invalid_argument(fmt::format("qubit {} out of range", q));
    }
    for (uint32_t r : x_col_[q]) {
        rows_[r].sign = !rows_[r].sign;
    }
}

std::vector<SparsePauli> StabilizerTableau::canonical_form() const {
    std::vector<SparsePauli> rows = rows_;
    // Column c < n is x_c, otherwise z_{c - n}. Lists may hold stale or repeated entries; the
    // bit is rechecked on use.
    std::vector<std::vector<uint32_t>> col(2 * n_);
    auto index_bits = [&](uint32_t r, uint32_t word_index, uint64_t x, uint64_t z) {
        for (uint64_t m = x; m; m &= m - 1) {
            col[std::size_t{word_index} * 64 + std::countr_zero(m)].push_back(r);
        }
        for (uint64_t m = z; m; m &= m - 1) {
            col[n_ + std::size_t{word_index} * 64 + std::countr_zero(m)].push_back(r);
        }
    };
    for (uint32_t r = 0; r < rows.size(); ++r) {
        for (const auto &w : rows[r].words) {
            index_bits(r, w.index, w.x, w.z);
        }
    }
    auto has_bit = [&](uint32_t r, std::size_t c) { return c < n_ ? rows[r].x(c) : rows[r].z(c - n_); };

    std::vector<uint8_t> used(rows.size(), 0);
    std::vector<uint32_t> order;
    order.reserve(rows.size());
    std::vector<PauliWord> before;
    for (std::size_t c = 0; c < 2 * n_ && order.size() < rows.size(); ++c) {
        uint32_t pivot = kNoQubit;
        for (uint32_t r : col[c]) {
            if (!used[r] && has_bit(r, c) && (pivot == kNoQubit || r < pivot)) {
                pivot = r;
            }
        }
        if (pivot == kNoQubit) {
            continue;
        }
        used[pivot] = 1;
        order.push_back(pivot);
        const std::vector<uint32_t> targets = col[c];
        for (uint32_t r : targets) {
            if (r == pivot || !has_bit(r, c)) {
                continue;
            }
            before.clear();
            for (const auto &w : rows[pivot].words) {
                before.push_back(word_at(rows[r], w.index));
            }
            rows[r].multiply_by(rows[pivot]);
            for (const auto &old : before) {
                PauliWord now = word_at(rows[r], old.index);
                index_bits(r, old.index, now.x & ~old.x, now.z & ~old.z);
            }
        }
    }
    std::vector<SparsePauli> out;
    out.reserve(rows.size());
    for (uint32_t r : order) {
        out.push_back(std::move(rows[r]));
    }
    for (uint32_t r = 0; r < rows.size(); ++r) {
        if (!used[r]) {
            out.push_back(std::move(rows[r]));
        }
    }
    return out;
}

bool StabilizerTableau::same_group(const StabilizerTableau &other) const {
    return n_ == other.n_ && canonical_form() == other.canonical_form();
}

bool StabilizerTableau::mutually_commuting() const {
    std::vector<std::vector<uint32_t>> touching(n_);
    for (uint32_t r = 0; r < rows_.size(); ++r) {
        for (std::size_t q : rows_[r].support()) {
            touching[q].push_back(r);
        }
    }
    std::vector<uint32_t> stamp(rows_.size(), kNoQubit);
    for (uint32_t r = 0; r < rows_.size(); ++r) {
        for (std::size_t q : rows_[r].support()) {
            for (uint32_t s : touching[q]) {
                if (s > r && stamp[s] != r) {
                    stamp[s] = r;
                    if (!rows_[r].commutes(rows_[s])) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

std::size_t StabilizerTableau::rank() const {
    auto canon = canonical_form();
    return static_cast<std::size_t>(
        std::count_if(canon.begin(), canon.end(), [](const SparsePauli &p) { return !p.is_identity(); }));
}

std::string_view axis_name(ShiftAxis axis) {
    switch (axis) {
    case ShiftAxis::kX:
        return "x";
    case ShiftAxis::kY:
        return "y";
    case ShiftAxis::kZ:
        return "z";
    }
    return "?";
}

ShiftAxis parse_axis(std::string_view name) {
    if (name == "x") {
        return ShiftAxis::kX;
    }
    if (name == "y") {
        return ShiftAxis::kY;
    }
    if (name == "z") {
        return ShiftAxis::kZ;
    }
    throw std::invalid_argument(fmt::format("unknown axis '{}' (expected x, y or z)", name));
}

SiteLattice SiteLattice::chain(std::size_t n) {
    SiteLattice l;
    l.dims = {n, 1, 1};
    return l;
}

SiteLattice SiteLattice::cube(std::size_t l) {
    SiteLattice lat;
    lat.dims = {l, l, l};
    return lat;
}

std::size_t SiteLattice::occupied_count() const {
    if (occupancy.empty()) {
        return size();
    }
    return static_cast<std::size_t>(std::count_if(occupancy.begin(), occupancy.end(), [](uint8_t v) { return v; }));
}

std::array<std::size_t, 3> SiteLattice::coords(std::size_t site) const {
    return {site % dims[0], (site / dims[0]) % dims[1], site / (dims[0] * dims[1])};
}

std::optional<std::size_t> SiteLattice::forward_neighbor(std::size_t site, ShiftAxis axis) const {
    auto k = static_cast<std::size_t>(axis);
    std::size_t stride = k == 0 ? 1 : (k == 1 ? dims[0] : dims[0] * dims[1]);
    std::size_t c = coords(site)[k];
    if (c + 1 < dims[k]) {
        return site + stride;
    }
    if (boundary == LatticeBoundary::kPeriodic && dims[k] >= 3) {
        return site - c * stride;
    }
    return std::nullopt;
}

void SiteLattice::validate() const {
    if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) {
        throw DomainError("lattice dimensions must be at least 1");
    }
    if (!occupancy.empty() && occupancy.size() != size()) {
        throw DomainError(fmt::format("occupancy mask has {} entries for {} sites", occupancy.size(), size()));
    }
}

ClusterGraph build_cluster_graph(const SiteLattice &lattice, std::span<const ShiftAxis> axes) {
    lattice.validate();
    if (axes.empty()) {
        throw DomainError("cluster generation needs at least one shift axis");
    }
    for (std::size_t i = 0; i < axes.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (axes[i] == axes[j]) {
                throw DomainError(fmt::format("axis {} listed twice", axis_name(axes[i])));
            }
        }
        if (lattice.boundary == LatticeBoundary::kPeriodic && lattice.dims[static_cast<int>(axes[i])] == 2) {
            throw DomainError(fmt::format("periodic axis {} needs length 1 or at least 3", axis_name(axes[i])));
        }
    }
    ClusterGraph g;
    std::vector<uint32_t> qubit(lattice.size(), kNoQubit);
    for (std::size_t s = 0; s < lattice.size(); ++s) {
        if (lattice.occupied(s)) {
            qubit[s] = static_cast<uint32_t>(g.sites.size());
            g.sites.push_back(s);
        }
    }
    for (ShiftAxis axis : axes) {
        for (std::size_t q = 0; q < g.sites.size(); ++q) {
            auto nb = lattice.forward_neighbor(g.sites[q], axis);
            if (nb && qubit[*nb] != kNoQubit) {
                g.edges.emplace_back(static_cast<uint32_t>(q), qubit[*nb]);
            }
        }
    }
    UnionFind uf(g.sites.size());
    for (auto [a, b] : g.edges) {
        uf.unite(a, b);
    }
    std::vector<uint32_t> label(g.sites.size(), kNoQubit);
    g.component.resize(g.sites.size());
    for (uint32_t q = 0; q < g.sites.size(); ++q) {
        uint32_t root = uf.find(q);
        if (label[root] == kNoQubit) {
            label[root] = static_cast<uint32_t>(g.component_count++);
        }
        g.component[q] = label[root];
    }
    return g;
}

ClusterResult generate_cluster(const SiteLattice &lattice, std::span<const ShiftAxis> axes,
                               const CliffordOptions &opts) {
    lattice.validate();
    std::size_t n = lattice.occupied_count();
    if (n == 0) {
        throw DomainError("cluster generation needs at least one occupied site");
    }
    if (n > opts.max_qubits) {
        throw CapacityError(fmt::format("{} qubits exceed the limit of {}", n, opts.max_qubits));
    }
    ClusterResult res;
    res.graph = build_cluster_graph(lattice, axes);
    res.tableau = StabilizerTableau::plus_state(n);
    for (auto [a, b] : res.graph.edges) {
        res.tableau.apply_cz(a, b);
    }
    return res;
}

std::vector<std::size_t> component_sizes(const ClusterGraph &graph) {
    std::vector<std::size_t> sizes(graph.component_count, 0);
    for (uint32_t c : graph.component) {
        ++sizes[c];
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

StabilizerTableau graph_state_tableau(const ClusterGraph &graph) {
    std::size_t n = graph.sites.size();
    std::vector<SparsePauli> rows(n);
    for (std::size_t q = 0; q < n; ++q) {
        rows[q].set(q, true, false);
    }
    for (auto [a, b] : graph.edges) {
        rows[a].set(b, false, !rows[a].z(b));
        rows[b].set(a, false, !rows[b].z(a));
    }
    return StabilizerTableau::from_generators(n, std::move(rows));
}

bool verify_generators(const StabilizerTableau &tableau, const SiteLattice &lattice,
                       std::span<const ShiftAxis> axes) {
    ClusterGraph g = build_cluster_graph(lattice, axes);
    if (g.sites.size() != tableau.n()) {
        return false;
    }
    return tableau.same_group(graph_state_tableau(g));
}

void write_histogram_csv(std::ostream &out, std::span<const std::size_t> sizes) {
    std::vector<std::size_t> sorted(sizes.begin(), sizes.end());
    std::sort(sorted.begin(), sorted.end());
    out << "size,count\n";
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        out << sorted[i] << ',' << (j - i) << '\n';
        i = j;
    }
}

std::string dump_tableau(const StabilizerTableau &tableau, std::span<const std::size_t> sites) {
    const std::size_t n = tableau.n();
    if (n > 64) {
        throw CapacityError(fmt::format("tableau dump is limited to 64 qubits, got {}", n));
    }
    if (sites.size() != n) {
        throw std::invalid_argument("dump_tableau needs one site label per qubit");
    }
    std::string s = fmt::format("latticegate-tableau 1\nqubits {}\nsites", n);
    for (std::size_t site : sites) {
        s += fmt::format(" {}", site);
    }
    s += '\n';
    for (const auto &row : tableau.rows()) {
        s += row.str(n);
        s += '\n';
    }
    return s;
}

}  // namespace latticegate
