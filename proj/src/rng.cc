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
#include <numbers>

namespace latticegate {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53;
constexpr uint32_t kMul1 = 0xCD9E8D57;
constexpr uint32_t kWeyl0 = 0x9E3779B9;
constexpr uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t &hi, uint32_t &lo) {
    uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

double CounterRng::uniform_at(uint64_t index) const {
    uint64_t block = index >> 1;
    Philox4x32::Counter ctr{static_cast<uint32_t>(block), static_cast<uint32_t>(block >> 32), substream_,
                            stream_};
    Philox4x32::Key key{static_cast<uint32_t>(seed_), static_cast<uint32_t>(seed_ >> 32)};
    auto out = Philox4x32::generate(ctr, key);
    int w = static_cast<int>(index & 1) * 2;
    uint64_t bits = (static_cast<uint64_t>(out[w]) << 32) | out[w + 1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double CounterRng::normal_at(uint64_t index) const {
    double u1 = 1.0 - uniform_at(2 * index);  // (0, 1]
    double u2 = uniform_at(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace latticegate
