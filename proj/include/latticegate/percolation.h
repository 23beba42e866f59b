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

#ifndef LATTICEGATE_PERCOLATION_H
#define LATTICEGATE_PERCOLATION_H

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace latticegate {

/// (Lx, Ly, Lz); unused axes are 1.
using Dims = std::array<std::size_t, 3>;

/// Hypercubic dims of the given dimension (1..3) and side L.
Dims lattice_dims(int dimension, std::size_t l);

/// Site percolation with open boundaries and nearest-neighbour adjacency.
struct PercolationTrial {
    Dims dims{1, 1, 1};
    double p = 0;
    uint64_t seed = 0;
    std::vector<uint8_t> mask;                 ///< empty unless requested
    std::vector<std::size_t> component_sizes;  ///< descending
    std::size_t occupied = 0;
    bool spanning = false;  ///< some component touches both x faces

    std::size_t largest() const { return component_sizes.empty() ? 0 : component_sizes.front(); }
};

/// Site s is occupied iff u(seed, s) < p, with u the percolation stream of the seed. The same
/// seed at a larger p occupies a superset of sites, so spanning is monotone in p per seed.
/// Throws DomainError for p outside [0, 1] or zero dims.
PercolationTrial run_trial(const Dims &dims, double p, uint64_t seed, bool keep_mask = false);

struct ThresholdPoint {
    double p;
    double spanning_probability;
    double stderr_;
};

struct ThresholdEstimate {
    double p_c = 0;
    double stderr_ = 0;  ///< binomial error mapped through the local slope, plus half the bracket
    double lo = 0;       ///< final bracket
    double hi = 1;
    int iterations = 0;
    std::vector<ThresholdPoint> evaluated;
};

struct ThresholdOptions {
    double tolerance = 1e-3;  ///< target bracket width
    int max_iterations = 40;
    uint64_t seed = 0;        ///< trial k uses seed + k at every p
};

/// Bisection on p for spanning probability 1/2, `trials` runs per point (in parallel).
/// Throws DomainError for L < 16 or trials < 100, EstimationError if the bracket is still wider
/// than the tolerance after max_iterations.
ThresholdEstimate estimate_threshold(int dimension, std::size_t l, std::size_t trials,
                                     const ThresholdOptions &opts = {});

struct ClusterStats {
    double p = 0;
    std::size_t trials = 0;
    double spanning_probability = 0;
    double stderr_ = 0;
    double mean_size = 0;    ///< mean component size over all components of all trials
    std::size_t max_size = 0;
    double giant_fraction = 0;  ///< mean over trials of largest component / occupied sites
};

/// Aggregates over one trial per seed, in seed order.
ClusterStats cluster_size_stats(const Dims &dims, double p, std::span<const uint64_t> seeds);

/// p,trials,spanning_prob,stderr,mean_size,max_size,giant_fraction
void write_percolation_csv(std::ostream &out, std::span<const ClusterStats> rows);

}  // namespace latticegate

#endif
