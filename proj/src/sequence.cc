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

#include "latticegate/sequence.h"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "latticegate/errors.h"

namespace latticegate {

using std::numbers::pi;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_terminal(const Instruction &instr) {
    return std::holds_alternative<Return>(instr) || std::holds_alternative<Freeze>(instr);
}

}  // namespace

Chain Chain::filled(std::size_t n, Boundary boundary) {
    Chain c;
    c.n_atoms = n;
    c.boundary = boundary;
    return c;
}

std::size_t Chain::occupied_count() const {
    std::size_t count = 0;
    for (std::size_t s = 0; s < n_atoms; ++s) {
        count += occupied(s) ? 1 : 0;
    }
    return count;
}

std::vector<std::pair<std::size_t, std::size_t>> Chain::bonds() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a + 1 < n_atoms; ++a) {
        if (occupied(a) && occupied(a + 1)) {
            out.emplace_back(a, a + 1);
        }
    }
    if (boundary == Boundary::kRing && n_atoms >= 3 && occupied(n_atoms - 1) && occupied(0)) {
        out.emplace_back(n_atoms - 1, 0);
    }
    return out;
}

bool is_spin_flip(const Rotate &r) {
    double a = std::fmod(std::abs(r.area), 2 * pi);
    return std::abs(a - pi) < pi / 2;
}

PulseSequence::PulseSequence(Chain chain, std::vector<Instruction> instructions)
    : chain_(std::move(chain)), instructions_(std::move(instructions)) {}

std::size_t PulseSequence::terminal_index() const {
    for (std::size_t i = 0; i < instructions_.size(); ++i) {
        if (is_terminal(instructions_[i])) {
            return i;
        }
    }
    return npos;
}

std::size_t PulseSequence::hold_count() const {
    std::size_t n = 0;
    for (const auto &instr : instructions_) {
        n += std::holds_alternative<Hold>(instr) ? 1 : 0;
    }
    return n;
}

double PulseSequence::total_hold() const {
    double t = 0;
    for (const auto &instr : instructions_) {
        if (const auto *h = std::get_if<Hold>(&instr)) {
            t += h->duration;
        }
    }
    return t;
}

bool PulseSequence::delocalized_variant() const {
    auto t = terminal_index();
    return t != npos && std::holds_alternative<Freeze>(instructions_[t]);
}

namespace {

bool same_instruction(const Instruction &a, const Instruction &b) {
    if (a.index() != b.index()) {
        return false;
    }
    return std::visit(Overloaded{
                          [&](const Rotate &r) {
                              const auto &o = std::get<Rotate>(b);
                              return r.area == o.area && r.axis_phase == o.axis_phase;
                          },
                          [&](const Shift &s) { return s.direction == std::get<Shift>(b).direction; },
                          [&](const Hold &h) { return h.duration == std::get<Hold>(b).duration; },
                          [](const Return &) { return true; },
                          [](const Freeze &) { return true; },
                      },
                      a);
}

}  // namespace

bool operator==(const PulseSequence &a, const PulseSequence &b) {
    const Chain &ca = a.chain_;
    const Chain &cb = b.chain_;
    if (ca.n_atoms != cb.n_atoms || ca.boundary != cb.boundary || ca.edge_policy != cb.edge_policy) {
        return false;
    }
    for (std::size_t s = 0; s < ca.n_atoms; ++s) {
        if (ca.occupied(s) != cb.occupied(s)) {
            return false;
        }
    }
    if (a.instructions_.size() != b.instructions_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.instructions_.size(); ++i) {
        if (!same_instruction(a.instructions_[i], b.instructions_[i])) {
            return false;
        }
    }
    return true;
}

PositionTracker::PositionTracker(const Chain &chain) : chain_(&chain), tags_(chain.n_atoms) {
    for (std::size_t a = 0; a < tags_.size(); ++a) {
        tags_[a] = {static_cast<int>(a), static_cast<int>(a)};
    }
}

void PositionTracker::apply(const Instruction &instr) {
    std::visit(Overloaded{
                   [&](const Rotate &r) {
                       if (is_spin_flip(r)) {
                           for (auto &t : tags_) {
                               std::swap(t.site0, t.site1);
                           }
                       }
                   },
                   [&](const Shift &s) {
                       for (auto &t : tags_) {
                           t.site1 += s.direction;
                       }
                   },
                   [](const Hold &) {},
                   [&](const Return &) {
                       for (std::size_t a = 0; a < tags_.size(); ++a) {
                           tags_[a] = {static_cast<int>(a), static_cast<int>(a)};
                       }
                   },
                   [](const Freeze &) {},
               },
               instr);
}

bool PositionTracker::split() const {
    for (std::size_t a = 0; a < tags_.size(); ++a) {
        if (chain_->occupied(a) && tags_[a].site0 != tags_[a].site1) {
            return true;
        }
    }
    return false;
}

int PositionTracker::wrap(int site) const {
    if (chain_->boundary != Boundary::kRing) {
        return site;
    }
    int n = static_cast<int>(chain_->n_atoms);
    return ((site % n) + n) % n;
}

bool PositionTracker::in_bounds(int site) const {
    int n = static_cast<int>(chain_->n_atoms);
    if (chain_->boundary == Boundary::kRing) {
        return true;
    }
    if (chain_->edge_policy == EdgePolicy::kStrict) {
        return site >= 0 && site < n;
    }
    return site >= -2 && site <= n + 1;
}

std::vector<Contact> PositionTracker::contacts() const {
    std::map<int, std::vector<std::pair<std::size_t, int>>> by_site;
    for (std::size_t a = 0; a < tags_.size(); ++a) {
        if (!chain_->occupied(a)) {
            continue;
        }
        by_site[wrap(tags_[a].site0)].emplace_back(a, 0);
        by_site[wrap(tags_[a].site1)].emplace_back(a, 1);
    }
    std::vector<Contact> out;
    for (const auto &[site, comps] : by_site) {
        for (std::size_t i = 0; i < comps.size(); ++i) {
            for (std::size_t j = i + 1; j < comps.size(); ++j) {
                auto [ai, si] = comps[i];
                auto [aj, sj] = comps[j];
                if (ai == aj) {
                    continue;
                }
                if (ai < aj) {
                    out.push_back({ai, si, aj, sj});
                } else {
                    out.push_back({aj, sj, ai, si});
                }
            }
        }
    }
    return out;
}

PulseSequence build_return_sequence(const Chain &chain, double t_hold, double alpha, const SequenceOptions &opts) {
    if (!(t_hold >= 0)) {
        throw DomainError("hold time must be non-negative");
    }
    std::vector<Instruction> instr{Rotate{pi / 2, opts.prep_axis_phase}, Shift{+1}};
    if (opts.spin_echo) {
        instr.insert(instr.end(), {Hold{t_hold / 2}, Rotate{pi, 0}, Hold{t_hold / 2}});
    } else {
        instr.emplace_back(Hold{t_hold});
    }
    instr.insert(instr.end(), {Return{}, Rotate{pi / 2, alpha}});
    return PulseSequence(chain, std::move(instr));
}

PulseSequence build_delocalize_sequence(const Chain &chain, double t_hold, const SequenceOptions &opts) {
    if (!(t_hold >= 0)) {
        throw DomainError("hold time must be non-negative");
    }
    std::vector<Instruction> instr{Rotate{pi / 2, opts.prep_axis_phase}, Shift{+1}};
    if (opts.spin_echo) {
        // The echo has exchanged which component sits on which side, so widening the
        // split means moving the |1> components back the other way.
        instr.insert(instr.end(), {Hold{t_hold / 2}, Rotate{pi, 0}, Hold{t_hold / 2}, Shift{-1}});
    } else {
        instr.insert(instr.end(), {Hold{t_hold}, Shift{+1}});
    }
    instr.emplace_back(Freeze{});
    return PulseSequence(chain, std::move(instr));
}

std::vector<Violation> validate(const PulseSequence &seq) {
    std::vector<Violation> out;
    constexpr auto npos = PulseSequence::npos;
    const Chain &chain = seq.chain();
    if (chain.n_atoms < 1) {
        out.push_back({npos, ViolationCode::kNoAtoms, "sequence has no lattice sites"});
        return out;
    }
    if (!chain.fill_mask.empty() && chain.fill_mask.size() != chain.n_atoms) {
        out.push_back({npos, ViolationCode::kMaskSize,
                       fmt::format("fill mask has {} entries for {} sites", chain.fill_mask.size(), chain.n_atoms)});
        return out;
    }
    if (chain.boundary == Boundary::kRing && chain.n_atoms < 3) {
        out.push_back({npos, ViolationCode::kRingTooSmall, "ring boundary needs at least 3 sites"});
    }

    PositionTracker tracker(chain);
    std::size_t terminals = 0;
    const auto &instrs = seq.instructions();
    for (std::size_t i = 0; i < instrs.size(); ++i) {
        const auto &instr = instrs[i];
        if (const auto *r = std::get_if<Rotate>(&instr)) {
            if (!(r->area >= 0 && r->area <= 2 * pi)) {
                out.push_back({i, ViolationCode::kAreaRange, fmt::format("pulse area {} outside [0, 2pi]", r->area)});
            }
            if (!is_spin_flip(*r) && tracker.split()) {
                out.push_back({i, ViolationCode::kPartialRotationWhileSplit,
                               "non-flip rotation while wave packets are split"});
            }
        } else if (const auto *h = std::get_if<Hold>(&instr)) {
            if (!(h->duration >= 0) || !std::isfinite(h->duration)) {
                out.push_back({i, ViolationCode::kNegativeHold, fmt::format("hold duration {} is negative", h->duration)});
            }
        } else if (const auto *s = std::get_if<Shift>(&instr)) {
            if (s->direction != 1 && s->direction != -1) {
                out.push_back({i, ViolationCode::kShiftDirection, fmt::format("shift direction {} is not +-1", s->direction)});
            }
        }
        if (is_terminal(instr)) {
            ++terminals;
            if (terminals == 2) {
                out.push_back({i, ViolationCode::kMultipleTerminals, "multiple terminals"});
            }
        } else if (terminals > 0 && !std::holds_alternative<Rotate>(instr)) {
            out.push_back({i, ViolationCode::kAfterTerminal, "only rotations may follow the terminal instruction"});
        }

        tracker.apply(instr);
        for (std::size_t a = 0; a < chain.n_atoms; ++a) {
            if (!chain.occupied(a)) {
                continue;
            }
            const auto &t = tracker.tags()[a];
            if (!tracker.in_bounds(t.site0) || !tracker.in_bounds(t.site1)) {
                out.push_back({i, ViolationCode::kOutOfBounds,
                               fmt::format("atom {} component leaves the lattice (sites {}, {})", a, t.site0, t.site1)});
                break;
            }
        }
    }
    if (terminals == 0) {
        out.push_back({npos, ViolationCode::kMissingTerminal, "sequence has no Return or Freeze"});
    }
    return out;
}

void require_valid(const PulseSequence &seq) {
    auto violations = validate(seq);
    if (violations.empty()) {
        return;
    }
    std::string msg = "invalid pulse sequence:";
    for (const auto &v : violations) {
        msg += v.instruction == PulseSequence::npos ? fmt::format(" [{}]", v.message)
                                                    : fmt::format(" [#{}: {}]", v.instruction, v.message);
    }
    throw ProtocolError(msg);
}

std::string to_text(const PulseSequence &seq) {
    const Chain &chain = seq.chain();
    std::string out = "latticegate-sequence 1\n";
    out += fmt::format("atoms {}\n", chain.n_atoms);
    out += fmt::format("boundary {}\n", chain.boundary == Boundary::kRing ? "ring" : "open");
    out += fmt::format("edge {}\n", chain.edge_policy == EdgePolicy::kStrict ? "strict" : "empty");
    if (!chain.fill_mask.empty()) {
        out += "fill ";
        for (auto f : chain.fill_mask) {
            out += f ? '1' : '0';
        }
        out += '\n';
    }
    for (const auto &instr : seq.instructions()) {
        out += std::visit(Overloaded{
                              [](const Rotate &r) { return fmt::format("rotate {:.17g} {:.17g}\n", r.area, r.axis_phase); },
                              [](const Shift &s) { return fmt::format("shift {}\n", s.direction); },
                              [](const Hold &h) { return fmt::format("hold {:.17g}\n", h.duration); },
                              [](const Return &) { return std::string("return\n"); },
                              [](const Freeze &) { return std::string("freeze\n"); },
                          },
                          instr);
    }
    return out;
}

PulseSequence sequence_from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    Chain chain;
    std::vector<Instruction> instrs;
    bool header = false;
    auto fail = [&](const std::string &why) {
        throw ProtocolError(fmt::format("sequence text line {}: {}", line_no, why));
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string word;
        if (!(fields >> word)) {
            continue;
        }
        auto read_double = [&] {
            double v;
            if (!(fields >> v)) {
                fail("expected a number after '" + word + "'");
            }
            return v;
        };
        if (!header) {
            int version = 0;
            if (word != "latticegate-sequence" || !(fields >> version) || version != 1) {
                fail("expected header 'latticegate-sequence 1'");
            }
            header = true;
        } else if (word == "atoms") {
            long long n = -1;
            if (!(fields >> n) || n < 0) {
                fail("atoms needs a non-negative integer");
            }
            chain.n_atoms = static_cast<std::size_t>(n);
        } else if (word == "boundary") {
            std::string b;
            fields >> b;
            if (b == "open") {
                chain.boundary = Boundary::kOpen;
            } else if (b == "ring") {
                chain.boundary = Boundary::kRing;
            } else {
                fail("boundary must be open or ring");
            }
        } else if (word == "edge") {
            std::string e;
            fields >> e;
            if (e == "empty") {
                chain.edge_policy = EdgePolicy::kEmptyEdge;
            } else if (e == "strict") {
                chain.edge_policy = EdgePolicy::kStrict;
            } else {
                fail("edge must be empty or strict");
            }
        } else if (word == "fill") {
            std::string bits;
            fields >> bits;
            chain.fill_mask.clear();
            for (char c : bits) {
                if (c != '0' && c != '1') {
                    fail("fill mask must be a string of 0 and 1");
                }
                chain.fill_mask.push_back(c == '1');
            }
        } else if (word == "rotate") {
            double area = read_double();
            double phase = read_double();
            instrs.emplace_back(Rotate{area, phase});
        } else if (word == "shift") {
            int d = 0;
            if (!(fields >> d)) {
                fail("shift needs an integer direction");
            }
            instrs.emplace_back(Shift{d});
        } else if (word == "hold") {
            instrs.emplace_back(Hold{read_double()});
        } else if (word == "return") {
            instrs.emplace_back(Return{});
        } else if (word == "freeze") {
            instrs.emplace_back(Freeze{});
        } else {
            fail("unknown keyword '" + word + "'");
        }
        std::string extra;
        if (fields >> extra) {
            fail("unexpected trailing field '" + extra + "'");
        }
    }
    if (!header) {
        throw ProtocolError("sequence text is empty");
    }
    return PulseSequence(std::move(chain), std::move(instrs));
}

}  // namespace latticegate
