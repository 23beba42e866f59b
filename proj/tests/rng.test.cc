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

#include "latticegate/rng.h"

#include <cmath>
#include <set>

#include "gtest/gtest.h"

using namespace latticegate;

TEST(rng, philox_known_answers) {
    // Reference vectors published with the Random123 distribution.
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(rng, uniform_range_and_moments) {
    CounterRng r(42, RngStream::kVacancy);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    double mean = s / n, var = s2 / n - mean * mean;
    EXPECT_NEAR(mean, 0.5, 5 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(var, 1.0 / 12, 0.002);
}

TEST(rng, normal_moments) {
    CounterRng r(7, RngStream::kDephasing, 3);
    const int n = 200000;
    double s = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        double z = r.normal();
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s / n, 0, 5 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1, 0.02);
    EXPECT_NEAR(s4 / n, 3, 0.1);
}

TEST(rng, random_access_matches_sequential) {
    CounterRng a(123, RngStream::kLoss, 9);
    CounterRng b(123, RngStream::kLoss, 9);
    for (uint64_t i = 0; i < 100; ++i) {
        EXPECT_EQ(a.uniform(), b.uniform_at(i));
    }
    EXPECT_EQ(b.seed(), 123u);
}

TEST(rng, streams_and_substreams_are_distinct) {
    std::set<double> seen;
    for (uint32_t sub = 0; sub < 4; ++sub) {
        for (auto stream : {RngStream::kVacancy, RngStream::kDephasing, RngStream::kPulse, RngStream::kPercolation}) {
            for (uint64_t seed : {0ull, 1ull}) {
                seen.insert(CounterRng(seed, stream, sub).uniform_at(0));
            }
        }
    }
    EXPECT_EQ(seen.size(), 32u);
}

TEST(rng, identity) {
    EXPECT_EQ(kRngName, "philox4x32-10");
    EXPECT_EQ(kRngVersion, 1);
}
