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

#ifndef LATTICEGATE_RNG_H
#define LATTICEGATE_RNG_H

#include <array>
#include <cstdint>
#include <string_view>

namespace latticegate {

inline constexpr std::string_view kRngName = "philox4x32-10";
inline constexpr int kRngVersion = 1;

/// Philox4x32 with 10 rounds (Salmon et al., Random123). Pure function of (counter, key).
struct Philox4x32 {
    using Counter = std::array<uint32_t, 4>;
    using Key = std::array<uint32_t, 2>;

    static Counter generate(Counter ctr, Key key);
};

/// Named substreams drawn from one master seed. Every consumer of randomness owns one
/// stream id, so enabling a noise channel never shifts the draws of another.
enum class RngStream : uint32_t {
    kVacancy = 0,
    kDephasing = 1,
    kLoss = 2,
    kPulse = 3,
    kFitNoise = 4,
    kPercolation = 5,
};

/// Counter-based random source addressed by (seed, stream, substream, index).
///
/// The Philox counter is {block_lo, block_hi, substream, stream} and the key is the 64-bit seed.
/// Each block yields two 53-bit uniforms. Ensemble member m uses substream m, which is the
/// seed-splitting rule: member draws are independent of thread count and evaluation order.
class CounterRng {
  public:
    CounterRng(uint64_t seed, RngStream stream, uint32_t substream = 0)
        : seed_(seed), stream_(static_cast<uint32_t>(stream)), substream_(substream) {}

    /// Uniform in [0, 1) at an absolute draw index.
    double uniform_at(uint64_t index) const;
    /// Standard normal at an absolute draw index (Box-Muller on uniforms 2i, 2i+1).
    double normal_at(uint64_t index) const;

    double uniform() { return uniform_at(next_++); }
    double normal() { return normal_at(next_++); }

    uint64_t seed() const { return seed_; }

  private:
    uint64_t seed_;
    uint32_t stream_;
    uint32_t substream_;
    uint64_t next_ = 0;
};

}  // namespace latticegate

#endif
