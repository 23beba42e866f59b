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

#ifndef LATTICEGATE_NOISE_H
#define LATTICEGATE_NOISE_H

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "latticegate/rng.h"
#include "latticegate/sequence.h"

namespace latticegate {

/// Imperfections of the experiment. Every channel is off at its default value.
struct NoiseModel {
    double fill_probability = 1.0;  ///< probability that a site holds an atom
    double pulse_area_error = 0.0;  ///< systematic fractional error on every pulse area
    double pulse_area_jitter = 0.0; ///< std of an extra independent fractional error per pulse
    double dephasing_sigma = 0.0;   ///< rad, per-atom Gaussian phase that survives the echo
    double dephasing_rate = 0.0;    ///< rad/s; total sigma(t)^2 = sigma^2 + (rate * t)^2
    double loss_per_atom = 0.0;     ///< probability an atom ends up depolarized (p_one = 1/2)
    std::size_t ensemble_size = 1;
    uint64_t seed = 0;

    /// Throws DomainError when a field is out of range.
    void validate() const;
    bool ideal() const;
    double dephasing_sigma_at(double t_hold) const;
};

/// One noise realization. Dephasing is stored as standard normals so a member keeps the same
/// draws when sigma(t) changes along a scan.
struct NoiseMember {
    std::vector<uint8_t> fill_mask;
    std::vector<double> dephasing_normals;
    std::vector<uint8_t> lost;
    std::size_t index = 0;
    uint64_t seed = 0;

    /// Fractional area error of the k-th rotation of a sequence (systematic plus jitter).
    double pulse_error(const NoiseModel &model, std::size_t k) const;
};

/// Independent Bernoulli(p_fill) occupancy, site s occupied iff uniform(seed, member, s) < p_fill.
std::vector<uint8_t> sample_vacancies(std::size_t n_sites, double p_fill, uint64_t seed, std::size_t member = 0);

/// Per-site Z phases N(0, sigma^2) for one member.
std::vector<double> apply_dephasing(const NoiseMember &member, double sigma);

NoiseMember draw_member(const NoiseModel &model, std::size_t n_sites, std::size_t member);

/// Scales every Rotate area by (1 + eps). Throws DomainError for eps <= -1.
PulseSequence apply_pulse_error(const PulseSequence &seq, double eps);

/// Applies the member's systematic-plus-jitter error to each rotation in order.
PulseSequence apply_member_pulse_errors(const PulseSequence &seq, const NoiseModel &model, const NoiseMember &member);

/// The chain with the member's vacancies applied on top of any existing mask.
Chain member_chain(const Chain &base, const NoiseMember &member);

/// Observable of one ensemble member: a vector of values and a weight (e.g. the number of atoms
/// contributing to it).
struct MemberSample {
    std::vector<double> values;
    double weight = 1.0;
};

struct EnsembleEstimate {
    std::vector<double> mean;
    std::vector<double> stderr_;
    std::size_t members = 0;
    double total_weight = 0;
};

/// Weighted mean sum(w v) / sum(w) over model.ensemble_size members, each evaluated by
/// observable(member_index). Members run in parallel; the reduction is in member order, so the
/// result is bit-identical for any thread count. The first failing member aborts the ensemble.
EnsembleEstimate ensemble_average(const NoiseModel &model, const std::function<MemberSample(std::size_t)> &observable);

}  // namespace latticegate

#endif
