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

#include "latticegate/statevec.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "latticegate/errors.h"
#include "latticegate/rng.h"

namespace latticegate {

using std::numbers::pi;

Eigen::Matrix2cd rotation_matrix(double area, double axis_phase) {
    const Complex i(0, 1);
    double c = std::cos(area / 2);
    double s = std::sin(area / 2);
    Eigen::Matrix2cd u;
    u << c, -i * std::exp(-i * axis_phase) * s, -i * std::exp(i * axis_phase) * s, c;
    return u;
}

ManyBodyState::ManyBodyState(Chain chain)
    : chain_(std::move(chain)), amps_(std::size_t{1} << chain_.n_atoms, Complex(0)) {
    amps_[0] = 1;
    tags_.resize(chain_.n_atoms);
    for (std::size_t a = 0; a < chain_.n_atoms; ++a) {
        tags_[a] = {static_cast<int>(a), static_cast<int>(a)};
    }
}

void ManyBodyState::apply_single(std::size_t site, const Eigen::Matrix2cd &u) {
    const std::size_t bit = std::size_t{1} << site;
    const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (std::size_t base = 0; base < amps_.size(); ++base) {
        if (base & bit) {
            continue;
        }
        Complex a0 = amps_[base];
        Complex a1 = amps_[base | bit];
        amps_[base] = u00 * a0 + u01 * a1;
        amps_[base | bit] = u10 * a0 + u11 * a1;
    }
}

void ManyBodyState::apply_z_phase(std::size_t site, double phase) {
    const std::size_t bit = std::size_t{1} << site;
    const Complex lo = std::polar(1.0, -phase / 2);
    const Complex hi = std::polar(1.0, phase / 2);
    for (std::size_t k = 0; k < amps_.size(); ++k) {
        amps_[k] *= (k & bit) ? hi : lo;
    }
}

void ManyBodyState::apply_collisions(std::span<const CollisionGate> gates) {
    if (gates.empty()) {
        return;
    }
    // Gates sharing one phase: amplitude picks up e^{-i phase * (number of matching sectors)}.
    struct Pattern {
        std::size_t mask;
        std::size_t want;
    };
    std::vector<Pattern> patterns;
    patterns.reserve(gates.size());
    for (const auto &g : gates) {
        std::size_t ba = std::size_t{1} << g.atom_a;
        std::size_t bb = std::size_t{1} << g.atom_b;
        patterns.push_back({ba | bb, (g.spin_a ? ba : 0) | (g.spin_b ? bb : 0)});
    }
    const double phase = gates.front().phase;
    std::vector<Complex> table(gates.size() + 1);
    for (std::size_t k = 0; k < table.size(); ++k) {
        table[k] = std::polar(1.0, -phase * static_cast<double>(k));
    }
    for (std::size_t k = 0; k < amps_.size(); ++k) {
        std::size_t hits = 0;
        for (const auto &p : patterns) {
            hits += ((k & p.mask) == p.want) ? 1 : 0;
        }
        if (hits) {
            amps_[k] *= table[hits];
        }
    }
}

double ManyBodyState::norm_squared() const {
    double s = 0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

ManyBodyState run(const PulseSequence &seq, const CalibrationModel &cal, const EngineOptions &opts) {
    require_valid(seq);
    const Chain &chain = seq.chain();
    if (chain.n_atoms > opts.max_atoms) {
        throw CapacityError(fmt::format("{} atoms exceeds the exact-engine limit of {}", chain.n_atoms, opts.max_atoms));
    }
    if (!opts.pre_readout_phases.empty() && opts.pre_readout_phases.size() != chain.n_atoms) {
        throw std::invalid_argument("pre_readout_phases must have one entry per site");
    }

    ManyBodyState state(chain);
    PositionTracker tracker(chain);
    const auto &instrs = seq.instructions();
    const std::size_t terminal = seq.terminal_index();
    const double offset_share = seq.hold_count() ? cal.offset / static_cast<double>(seq.hold_count()) : 0.0;
    bool dephased = opts.pre_readout_phases.empty();
    auto dephase = [&] {
        for (std::size_t a = 0; a < chain.n_atoms; ++a) {
            if (chain.occupied(a) && opts.pre_readout_phases[a] != 0) {
                state.apply_z_phase(a, opts.pre_readout_phases[a]);
            }
        }
        dephased = true;
    };

    for (std::size_t i = 0; i < instrs.size(); ++i) {
        if (i > terminal && opts.stop_before_readout) {
            break;
        }
        const auto &instr = instrs[i];
        if (const auto *r = std::get_if<Rotate>(&instr)) {
            if (i > terminal && !dephased) {
                dephase();
            }
            Eigen::Matrix2cd u = rotation_matrix(r->area, r->axis_phase);
            for (std::size_t a = 0; a < chain.n_atoms; ++a) {
                if (chain.occupied(a)) {
                    state.apply_single(a, u);
                }
            }
        } else if (const auto *h = std::get_if<Hold>(&instr)) {
            double phase = cal.slope * h->duration + offset_share;
            std::vector<CollisionGate> gates;
            for (const auto &c : tracker.contacts()) {
                // Same-spin encounters carry no differential phase.
                if (c.spin_a != c.spin_b) {
                    gates.push_back({c.atom_a, c.atom_b, c.spin_a, c.spin_b, phase});
                }
            }
            state.apply_collisions(gates);
        }
        tracker.apply(instr);
    }
    if (!dephased) {
        dephase();
    }
    state.set_tags(tracker.tags());

    double norm = state.norm_squared();
    if (std::abs(norm - 1.0) > opts.norm_tolerance) {
        throw std::runtime_error(fmt::format("state norm drifted to {:.15g}", norm));
    }
    return state;
}

std::vector<double> probability_one_per_atom(const ManyBodyState &state) {
    std::vector<double> p(state.n_atoms(), 0.0);
    auto amps = state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
        double w = std::norm(amps[k]);
        if (w == 0) {
            continue;
        }
        for (std::size_t a = 0; a < p.size(); ++a) {
            if ((k >> a) & 1) {
                p[a] += w;
            }
        }
    }
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (!state.chain().occupied(a)) {
            p[a] = 0;
        }
    }
    return p;
}

double probability_one(const ManyBodyState &state) {
    auto p = probability_one_per_atom(state);
    std::size_t occ = state.chain().occupied_count();
    if (occ == 0) {
        return 0;
    }
    double s = 0;
    for (double v : p) {
        s += v;
    }
    return s / static_cast<double>(occ);
}

double sample_probability_one(const ManyBodyState &state, std::size_t shots, uint64_t seed) {
    auto amps = state.amplitudes();
    std::vector<double> cdf(amps.size());
    double acc = 0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        acc += std::norm(amps[k]);
        cdf[k] = acc;
    }
    std::size_t occ = state.chain().occupied_count();
    if (shots == 0 || occ == 0) {
        return 0;
    }
    std::size_t occ_mask = 0;
    for (std::size_t a = 0; a < state.n_atoms(); ++a) {
        if (state.chain().occupied(a)) {
            occ_mask |= std::size_t{1} << a;
        }
    }
    CounterRng rng(seed, RngStream::kFitNoise);
    std::size_t ones = 0;
    for (std::size_t s = 0; s < shots; ++s) {
        double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
        ones += static_cast<std::size_t>(std::popcount(k & occ_mask));
    }
    return static_cast<double>(ones) / static_cast<double>(shots * occ);
}

namespace {

/// Density matrix of the subsystem `part` as M M^dagger with M the state reshaped to part x rest.
Eigen::MatrixXcd partial_trace(const ManyBodyState &state, std::span<const std::size_t> part) {
    const std::size_t n = state.n_atoms();
    std::size_t part_mask = 0;
    for (std::size_t a : part) {
        if (a >= n) {
            throw std::out_of_range(fmt::format("atom index {} out of range for {} atoms", a, n));
        }
        if (part_mask & (std::size_t{1} << a)) {
            throw std::out_of_range(fmt::format("atom index {} repeated", a));
        }
        part_mask |= std::size_t{1} << a;
    }
    const std::size_t k = part.size();
    const std::size_t dim_a = std::size_t{1} << k;
    const std::size_t dim_b = std::size_t{1} << (n - k);
    std::vector<std::size_t> rest;
    for (std::size_t a = 0; a < n; ++a) {
        if (!(part_mask & (std::size_t{1} << a))) {
            rest.push_back(a);
        }
    }
    Eigen::MatrixXcd m(dim_a, dim_b);
    auto amps = state.amplitudes();
    for (std::size_t ia = 0; ia < dim_a; ++ia) {
        std::size_t base = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if ((ia >> j) & 1) {
                base |= std::size_t{1} << part[j];
            }
        }
        for (std::size_t ib = 0; ib < dim_b; ++ib) {
            std::size_t idx = base;
            for (std::size_t j = 0; j < rest.size(); ++j) {
                if ((ib >> j) & 1) {
                    idx |= std::size_t{1} << rest[j];
                }
            }
            m(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib)) = amps[idx];
        }
    }
    return m * m.adjoint();
}

}  // namespace

Eigen::MatrixXcd reduced_density(const ManyBodyState &state, std::span<const std::size_t> atoms) {
    if (atoms.empty() || atoms.size() > 2) {
        throw std::out_of_range("reduced_density supports one or two atoms");
    }
    return partial_trace(state, atoms);
}

double entanglement_entropy(const ManyBodyState &state, std::span<const std::size_t> part, double eigenvalue_floor) {
    const std::size_t n = state.n_atoms();
    std::vector<uint8_t> in_part(n, 0);
    for (std::size_t a : part) {
        if (a >= n) {
            throw std::out_of_range(fmt::format("atom index {} out of range for {} atoms", a, n));
        }
        in_part[a] = 1;
    }
    // Both sides share a spectrum; diagonalize the smaller one.
    std::vector<std::size_t> side_a, side_b;
    for (std::size_t a = 0; a < n; ++a) {
        (in_part[a] ? side_a : side_b).push_back(a);
    }
    const auto &smaller = side_a.size() <= side_b.size() ? side_a : side_b;
    if (smaller.empty()) {
        return 0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(partial_trace(state, smaller), Eigen::EigenvaluesOnly);
    double s = 0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        double lam = solver.eigenvalues()[i];
        if (lam > eigenvalue_floor) {
            s -= lam * std::log2(lam);
        }
    }
    return s;
}

PauliString PauliString::parse(std::string_view text) {
    PauliString p;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        p.negative = text.front() == '-';
        text.remove_prefix(1);
    }
    for (char c : text) {
        if (c == '_') {
            c = 'I';
        }
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw std::invalid_argument(fmt::format("bad Pauli character '{}'", c));
        }
        p.ops.push_back(c);
    }
    return p;
}

std::string PauliString::str() const { return (negative ? "-" : "+") + ops; }

double pauli_expectation(const ManyBodyState &state, const PauliString &p) {
    if (p.ops.size() != state.n_atoms()) {
        throw std::invalid_argument("Pauli string length does not match the atom count");
    }
    std::size_t xmask = 0, zmask = 0;
    int n_y = 0;
    for (std::size_t a = 0; a < p.ops.size(); ++a) {
        char c = p.ops[a];
        if (c == 'X' || c == 'Y') {
            xmask |= std::size_t{1} << a;
        }
        if (c == 'Z' || c == 'Y') {
            zmask |= std::size_t{1} << a;
        }
        n_y += c == 'Y';
    }
    // Y|b> = i (-1)^b |1-b>, so P|k> = i^{nY} (-1)^{|k & zmask|} |k ^ xmask>.
    static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex global = kIPow[n_y % 4];
    auto amps = state.amplitudes();
    Complex acc = 0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        Complex term = std::conj(amps[k ^ xmask]) * amps[k];
        acc += (std::popcount(k & zmask) & 1) ? -term : term;
    }
    double v = (global * acc).real();
    return p.negative ? -v : v;
}

LocalCorrection LocalCorrection::for_sequence(const PulseSequence &seq) {
    LocalCorrection c;
    const auto &instrs = seq.instructions();
    const std::size_t terminal = seq.terminal_index();
    bool seen_prep = false;
    for (std::size_t i = 0; i < instrs.size() && i < terminal; ++i) {
        if (const auto *r = std::get_if<Rotate>(&instrs[i])) {
            if (!seen_prep) {
                c.phase_gate = pi / 2 - r->axis_phase;
                seen_prep = true;
            } else if (is_spin_flip(*r)) {
                c.flip = !c.flip;
            }
        }
    }
    const Chain &chain = seq.chain();
    c.z_on_site.assign(chain.n_atoms, 0);
    for (auto [left, right] : chain.bonds()) {
        c.z_on_site[left] ^= 1;
    }
    return c;
}

void LocalCorrection::apply(ManyBodyState &state) const {
    const Chain &chain = state.chain();
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    Eigen::Matrix2cd p;
    p << 1, 0, 0, std::polar(1.0, phase_gate);
    Eigen::Matrix2cd z;
    z << 1, 0, 0, -1;
    for (std::size_t a = 0; a < chain.n_atoms; ++a) {
        if (!chain.occupied(a)) {
            continue;
        }
        Eigen::Matrix2cd u = p;
        if (flip) {
            u = u * x;
        }
        if (a < z_on_site.size() && z_on_site[a]) {
            u = z * u;
        }
        state.apply_single(a, u);
    }
}

PauliString cluster_generator(const Chain &chain, std::size_t site) {
    PauliString p;
    p.ops.assign(chain.n_atoms, 'I');
    p.ops[site] = 'X';
    for (auto [a, b] : chain.bonds()) {
        if (a == site) {
            p.ops[b] = p.ops[b] == 'Z' ? 'I' : 'Z';
        } else if (b == site) {
            p.ops[a] = p.ops[a] == 'Z' ? 'I' : 'Z';
        }
    }
    return p;
}

std::vector<double> stabilizer_check(const ManyBodyState &pre_readout, const PulseSequence &seq) {
    ManyBodyState corrected = pre_readout;
    LocalCorrection::for_sequence(seq).apply(corrected);
    const Chain &chain = seq.chain();
    std::vector<double> out;
    for (std::size_t a = 0; a < chain.n_atoms; ++a) {
        if (chain.occupied(a)) {
            out.push_back(pauli_expectation(corrected, cluster_generator(chain, a)));
        }
    }
    return out;
}

std::string dump_state(const ManyBodyState &state) {
    std::string out;
    auto amps = state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
        out += fmt::format("{} {:.12g} {:.12g}\n", k, amps[k].real(), amps[k].imag());
    }
    return out;
}

}  // namespace latticegate
