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

#include <numbers>

#include "gtest/gtest.h"

#include "latticegate/errors.h"

using namespace latticegate;
using std::numbers::pi;

namespace {

bool has_code(const std::vector<Violation> &v, ViolationCode code) {
    for (const auto &x : v) {
        if (x.code == code) {
            return true;
        }
    }
    return false;
}

std::vector<PositionTag> final_tags(const PulseSequence &seq) {
    PositionTracker tr(seq.chain());
    for (const auto &i : seq.instructions()) {
        tr.apply(i);
    }
    return tr.tags();
}

}  // namespace

TEST(sequence, return_layout) {
    auto seq = build_return_sequence(Chain::filled(4), 200e-6, 0.3);
    const auto &in = seq.instructions();
    ASSERT_EQ(in.size(), 7u);
    EXPECT_EQ(std::get<Rotate>(in[0]).area, pi / 2);
    EXPECT_EQ(std::get<Shift>(in[1]).direction, 1);
    EXPECT_EQ(std::get<Hold>(in[2]).duration, 100e-6);
    EXPECT_EQ(std::get<Rotate>(in[3]).area, pi);
    EXPECT_EQ(std::get<Hold>(in[4]).duration, 100e-6);
    EXPECT_TRUE(std::holds_alternative<Return>(in[5]));
    EXPECT_EQ(std::get<Rotate>(in[6]).axis_phase, 0.3);
    EXPECT_EQ(seq.terminal_index(), 5u);
    EXPECT_EQ(seq.hold_count(), 2u);
    EXPECT_DOUBLE_EQ(seq.total_hold(), 200e-6);
    EXPECT_FALSE(seq.delocalized_variant());
    EXPECT_TRUE(validate(seq).empty());
}

TEST(sequence, echo_appears_once_at_midpoint) {
    auto seq = build_return_sequence(Chain::filled(3), 300e-6, 0);
    int flips = 0;
    double before = 0, after = 0;
    for (const auto &i : seq.instructions()) {
        if (const auto *r = std::get_if<Rotate>(&i); r && is_spin_flip(*r)) {
            ++flips;
        } else if (const auto *h = std::get_if<Hold>(&i)) {
            (flips == 0 ? before : after) += h->duration;
        }
    }
    EXPECT_EQ(flips, 1);
    EXPECT_DOUBLE_EQ(before, after);
}

TEST(sequence, no_echo_variant) {
    SequenceOptions o;
    o.spin_echo = false;
    auto seq = build_return_sequence(Chain::filled(2), 1e-4, 0, o);
    EXPECT_EQ(seq.instructions().size(), 5u);
    EXPECT_EQ(seq.hold_count(), 1u);
    EXPECT_TRUE(validate(seq).empty());
}

TEST(sequence, builders_are_deterministic) {
    EXPECT_TRUE(build_return_sequence(Chain::filled(5), 1e-4, 1.0) == build_return_sequence(Chain::filled(5), 1e-4, 1.0));
    EXPECT_FALSE(build_return_sequence(Chain::filled(5), 1e-4, 1.0) == build_return_sequence(Chain::filled(5), 1e-4, 1.1));
    EXPECT_TRUE(build_delocalize_sequence(Chain::filled(5), 1e-4) == build_delocalize_sequence(Chain::filled(5), 1e-4));
}

TEST(sequence, negative_hold_rejected_by_builders) {
    EXPECT_THROW(build_return_sequence(Chain::filled(2), -1e-6, 0), DomainError);
    EXPECT_THROW(build_delocalize_sequence(Chain::filled(2), -1e-6), DomainError);
}

TEST(sequence, return_brings_components_home) {
    for (bool echo : {true, false}) {
        SequenceOptions o;
        o.spin_echo = echo;
        auto tags = final_tags(build_return_sequence(Chain::filled(6), 1e-4, 0, o));
        for (std::size_t a = 0; a < tags.size(); ++a) {
            EXPECT_EQ(tags[a].site0, static_cast<int>(a));
            EXPECT_EQ(tags[a].site1, static_cast<int>(a));
        }
    }
}

TEST(sequence, delocalize_spans_two_sites) {
    for (bool echo : {true, false}) {
        SequenceOptions o;
        o.spin_echo = echo;
        auto seq = build_delocalize_sequence(Chain::filled(6), 1e-4, o);
        EXPECT_TRUE(seq.delocalized_variant());
        EXPECT_TRUE(validate(seq).empty());
        auto tags = final_tags(seq);
        for (std::size_t a = 0; a < tags.size(); ++a) {
            EXPECT_EQ(std::abs(tags[a].site0 - tags[a].site1), 2);
            // With the echo the pair straddles the home site; without it, the |0> frame puts it at j, j + 2.
            EXPECT_EQ(tags[a].site0 + tags[a].site1, 2 * static_cast<int>(a) + (echo ? 0 : 2));
        }
        if (echo) {
            EXPECT_EQ(tags[2].site0 - tags[2].site1, 2);
        }
    }
}

TEST(sequence, single_atom_delocalizes_without_contacts) {
    auto seq = build_delocalize_sequence(Chain::filled(1), 1e-4);
    PositionTracker tr(seq.chain());
    for (const auto &i : seq.instructions()) {
        tr.apply(i);
        EXPECT_TRUE(tr.contacts().empty());
    }
    EXPECT_EQ(std::abs(tr.tags()[0].site0 - tr.tags()[0].site1), 2);
}

TEST(sequence, shift_pairs_one_with_zero_of_right_neighbour) {
    Chain c = Chain::filled(4);
    PositionTracker tr(c);
    tr.apply(Rotate{pi / 2, 0});
    tr.apply(Shift{+1});
    auto contacts = tr.contacts();
    ASSERT_EQ(contacts.size(), 3u);
    for (const auto &k : contacts) {
        EXPECT_EQ(k.atom_b, k.atom_a + 1);
        EXPECT_EQ(k.spin_a, 1);
        EXPECT_EQ(k.spin_b, 0);
    }
    // The echo swaps labels: now |0>_j meets |1>_{j+1}.
    tr.apply(Rotate{pi, 0});
    for (const auto &k : tr.contacts()) {
        EXPECT_EQ(k.spin_a, 0);
        EXPECT_EQ(k.spin_b, 1);
    }
}

TEST(sequence, ring_contacts_wrap) {
    Chain c = Chain::filled(5, Boundary::kRing);
    PositionTracker tr(c);
    tr.apply(Shift{+1});
    auto contacts = tr.contacts();
    EXPECT_EQ(contacts.size(), 5u);
    bool wrap = false;
    for (const auto &k : contacts) {
        wrap |= (k.atom_a == 0 && k.atom_b == 4 && k.spin_a == 0 && k.spin_b == 1);
    }
    EXPECT_TRUE(wrap);
}

TEST(sequence, vacancies_break_contacts) {
    Chain c = Chain::filled(5);
    c.fill_mask = {1, 1, 0, 1, 1};
    PositionTracker tr(c);
    tr.apply(Shift{+1});
    auto contacts = tr.contacts();
    ASSERT_EQ(contacts.size(), 2u);
    EXPECT_EQ(contacts[0].atom_a, 0u);
    EXPECT_EQ(contacts[1].atom_a, 3u);
    EXPECT_EQ(c.bonds().size(), 2u);
}

TEST(sequence, bonds) {
    EXPECT_EQ(Chain::filled(4).bonds().size(), 3u);
    EXPECT_EQ(Chain::filled(4, Boundary::kRing).bonds().size(), 4u);
    EXPECT_EQ(Chain::filled(1).bonds().size(), 0u);
}

TEST(sequence, validate_multiple_terminals) {
    PulseSequence seq(Chain::filled(2), {Rotate{pi / 2, 0}, Return{}, Return{}});
    auto v = validate(seq);
    EXPECT_TRUE(has_code(v, ViolationCode::kMultipleTerminals));
    EXPECT_THROW(require_valid(seq), ProtocolError);
}

TEST(sequence, validate_missing_terminal_and_ranges) {
    PulseSequence seq(Chain::filled(2), {Rotate{7.0, 0}, Hold{-1}, Shift{2}});
    auto v = validate(seq);
    EXPECT_TRUE(has_code(v, ViolationCode::kMissingTerminal));
    EXPECT_TRUE(has_code(v, ViolationCode::kAreaRange));
    EXPECT_TRUE(has_code(v, ViolationCode::kNegativeHold));
    EXPECT_TRUE(has_code(v, ViolationCode::kShiftDirection));
}

TEST(sequence, validate_sequence_level) {
    Chain ring = Chain::filled(2, Boundary::kRing);
    EXPECT_TRUE(has_code(validate(build_return_sequence(ring, 0, 0)), ViolationCode::kRingTooSmall));
    Chain bad = Chain::filled(3);
    bad.fill_mask = {1, 0};
    EXPECT_TRUE(has_code(validate(build_return_sequence(bad, 0, 0)), ViolationCode::kMaskSize));
    Chain none = Chain::filled(0);
    EXPECT_TRUE(has_code(validate(PulseSequence(none, {Return{}})), ViolationCode::kNoAtoms));
}

TEST(sequence, validate_edge_policy) {
    Chain strict = Chain::filled(4);
    strict.edge_policy = EdgePolicy::kStrict;
    EXPECT_TRUE(has_code(validate(build_return_sequence(strict, 1e-4, 0)), ViolationCode::kOutOfBounds));
    EXPECT_TRUE(validate(build_return_sequence(Chain::filled(4), 1e-4, 0)).empty());
    // An empty edge site is fine under strict policy.
    strict.fill_mask = {1, 1, 1, 0};
    EXPECT_TRUE(validate(build_return_sequence(strict, 1e-4, 0)).empty());
    // Three steps past the edge break even the empty-edge policy.
    PulseSequence far(Chain::filled(3), {Rotate{pi / 2, 0}, Shift{1}, Shift{1}, Shift{1}, Return{}});
    EXPECT_TRUE(has_code(validate(far), ViolationCode::kOutOfBounds));
}

TEST(sequence, validate_after_terminal_and_split_rotation) {
    PulseSequence seq(Chain::filled(2), {Rotate{pi / 2, 0}, Shift{1}, Rotate{pi / 2, 0}, Return{}, Hold{0}});
    auto v = validate(seq);
    EXPECT_TRUE(has_code(v, ViolationCode::kPartialRotationWhileSplit));
    EXPECT_TRUE(has_code(v, ViolationCode::kAfterTerminal));
}

TEST(sequence, text_round_trip) {
    Chain c = Chain::filled(6, Boundary::kRing);
    c.fill_mask = {1, 0, 1, 1, 0, 1};
    c.edge_policy = EdgePolicy::kStrict;
    for (const auto &seq : {build_return_sequence(c, 123.456e-6, 1.0 / 3.0), build_delocalize_sequence(c, 7e-5)}) {
        std::string text = to_text(seq);
        auto back = sequence_from_text(text);
        EXPECT_TRUE(back == seq);
        EXPECT_EQ(to_text(back), text);
    }
}

TEST(sequence, text_parse_errors_name_the_line) {
    try {
        sequence_from_text("latticegate-sequence 1\natoms 2\n# comment\nwobble 3\n");
        FAIL() << "expected ProtocolError";
    } catch (const ProtocolError &e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
    }
    EXPECT_THROW(sequence_from_text("atoms 2\n"), ProtocolError);
    EXPECT_THROW(sequence_from_text("latticegate-sequence 1\natoms 2\nrotate abc 0\n"), ProtocolError);
}
