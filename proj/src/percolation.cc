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

#include "latticegate/percolation.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "latticegate/errors.h"
#include "latticegate/parallel.h"
#include "latticegate/rng.h"
#include "latticegate/union_find.h"

namespace latticegate {

Dims lattice_dims(int dimension, std::size_t l) {
    if (dimension < 1 || dimension > 3) {
        throw DomainError(fmt::format("dimension must be 1, 2 or 3, got {}", dimension));
    }
    return {l, dimension >= 2 ? l : 1, dimension >= 3 ? l : 1};
}

PercolationTrial run_trial(const Dims &dims, double p, uint64_t seed, bool keep_mask) {
    if (!(p >= 0 && p <= 1)) {
        throw DomainError(fmt::format("fill probability {} outside [0, 1]", p));
    }
    if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) {
        throw DomainError("percolation dims must be at least 1");
    }
    const std::size_t lx = dims[0], ly = dims[1], lz = dims[2];
    const std::size_t n = lx * ly * lz;
    if (n > UINT32_MAX) {
        throw CapacityError("percolation lattice too large");
    }
    PercolationTrial t;
    t.dims = dims;
    t.p = p;
    t.seed = seed;

    CounterRng rng(seed, RngStream::kPercolation);
    std::vector<uint8_t> occ(n);
    for (std::size_t s = 0; s < n; ++s) {
        occ[s] = rng.uniform_at(s) < p;
        t.occupied += occ[s];
    }
    UnionFind uf(n);
    for (std::size_t z = 0; z < lz; ++z) {
        for (std::size_t y = 0; y < ly; ++y) {
            std::size_t row = lx * (y + ly * z);
            for (std::size_t x = 0; x < lx; ++x) {
                std::size_t s = row + x;
                if (!occ[s]) {
                    continue;
                }
                if (x + 1 < lx && occ[s + 1]) {
                    uf.unite(static_cast<uint32_t>(s), static_cast<uint32_t>(s + 1));
                }
                if (y + 1 < ly && occ[s + lx]) {
                    uf.unite(static_cast<uint32_t>(s), static_cast<uint32_t>(s + lx));
                }
                if (z + 1 < lz && occ[s + lx * ly]) {
                    uf.unite(static_cast<uint32_t>(s), static_cast<uint32_t>(s + lx * ly));
                }
            }
        }
    }
    // Spanning: a root seen on the x = 0 face reappears on the x = Lx - 1 face.
    std::vector<uint8_t> on_left(n, 0);
    for (std::size_t yz = 0; yz < ly * lz; ++yz) {
        std::size_t s = yz * lx;
        if (occ[s]) {
            on_left[uf.find(static_cast<uint32_t>(s))] = 1;
        }
    }
    for (std::size_t yz = 0; yz < ly * lz && !t.spanning; ++yz) {
        std::size_t s = yz * lx + lx - 1;
        if (occ[s] && on_left[uf.find(static_cast<uint32_t>(s))]) {
            t.spanning = true;
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (occ[s] && uf.find(static_cast<uint32_t>(s)) == s) {
            t.component_sizes.push_back(uf.size_of(static_cast<uint32_t>(s)));
        }
    }
    std::sort(t.component_sizes.begin(), t.component_sizes.end(), std::greater<>());
    if (keep_mask) {
        t.mask = std::move(occ);
    }
    return t;
}

namespace {

ThresholdPoint spanning_point(const Dims &dims, double p, std::size_t trials, uint64_t seed) {
    std::vector<uint8_t> span(trials, 0);
    parallel_for(trials, [&](std::size_t k) { span[k] = run_trial(dims, p, seed + k).spanning; });
    double hits = 0;
    for (uint8_t s : span) {
        hits += s;
    }
    double prob = hits / static_cast<double>(trials);
    return {p, prob, std::sqrt(prob * (1 - prob) / static_cast<double>(trials))};
}

}  // namespace

ThresholdEstimate estimate_threshold(int dimension, std::size_t l, std::size_t trials, const ThresholdOptions &opts) {
    if (l < 16) {
        throw DomainError(fmt::format("threshold estimation needs L >= 16, got {}", l));
    }
    if (trials < 100) {
        throw DomainError(fmt::format("threshold estimation needs at least 100 trials per point, got {}", trials));
    }
    if (!(opts.tolerance > 0)) {
        throw DomainError("bisection tolerance must be positive");
    }
    const Dims dims = lattice_dims(dimension, l);
    ThresholdEstimate est;
    est.lo = 0;
    est.hi = 1;
    while (est.hi - est.lo > opts.tolerance) {
        if (est.iterations == opts.max_iterations) {
            throw EstimationError(fmt::format("bisection did not converge in {} steps; bracket [{:.6g}, {:.6g}]",
                                              opts.max_iterations, est.lo, est.hi));
        }
        double mid = 0.5 * (est.lo + est.hi);
        ThresholdPoint pt = spanning_point(dims, mid, trials, opts.seed);
        est.evaluated.push_back(pt);
        (pt.spanning_probability < 0.5 ? est.lo : est.hi) = mid;
        ++est.iterations;
    }
    est.p_c = 0.5 * (est.lo + est.hi);

    // Local slope of the spanning curve from the closest evaluated points on either side.
    const ThresholdPoint *below = nullptr, *above = nullptr;
    for (const auto &pt : est.evaluated) {
        if (pt.p <= est.lo && (!below || pt.p > below->p)) {
            below = &pt;
        }
        if (pt.p >= est.hi && (!above || pt.p < above->p)) {
            above = &pt;
        }
    }
    double half_bracket = 0.5 * (est.hi - est.lo);
    double sigma_p = 0.5 / std::sqrt(static_cast<double>(trials));
    double stat = 0;
    if (below && above && above->spanning_probability > below->spanning_probability) {
        double slope = (above->spanning_probability - below->spanning_probability) / (above->p - below->p);
        stat = sigma_p / slope;
    }
    est.stderr_ = std::hypot(stat, half_bracket);
    return est;
}

ClusterStats cluster_size_stats(const Dims &dims, double p, std::span<const uint64_t> seeds) {
    ClusterStats st;
    st.p = p;
    st.trials = seeds.size();
    if (seeds.empty()) {
        return st;
    }
    std::vector<PercolationTrial> trials(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t k) { trials[k] = run_trial(dims, p, seeds[k]); });
    double spans = 0, size_sum = 0, components = 0, giant = 0;
    for (const auto &t : trials) {
        spans += t.spanning;
        for (std::size_t s : t.component_sizes) {
            size_sum += static_cast<double>(s);
        }
        components += static_cast<double>(t.component_sizes.size());
        st.max_size = std::max(st.max_size, t.largest());
        giant += t.occupied ? static_cast<double>(t.largest()) / static_cast<double>(t.occupied) : 0.0;
    }
    double m = static_cast<double>(seeds.size());
    st.spanning_probability = spans / m;
    st.stderr_ = std::sqrt(st.spanning_probability * (1 - st.spanning_probability) / m);
    st.mean_size = components > 0 ? size_sum / components : 0;
    st.giant_fraction = giant / m;
    return st;
}

void write_percolation_csv(std::ostream &out, std::span<const ClusterStats> rows) {
    out << "p,trials,spanning_prob,stderr,mean_size,max_size,giant_fraction\n";
    for (const auto &r : rows) {
        out << fmt::format("{:.12g},{},{:.12g},{:.12g},{:.12g},{},{:.12g}\n", r.p, r.trials, r.spanning_probability,
                           r.stderr_, r.mean_size, r.max_size, r.giant_fraction);
    }
}

}  // namespace latticegate
