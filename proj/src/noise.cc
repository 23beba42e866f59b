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

#include "latticegate/noise.h"

#include <cmath>

#include <fmt/format.h>

#include "latticegate/errors.h"
#include "latticegate/parallel.h"

namespace latticegate {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void NoiseModel::validate() const {
    if (!is_probability(fill_probability)) {
        throw DomainError(fmt::format("fill_probability {} outside [0, 1]", fill_probability));
    }
    if (!is_probability(loss_per_atom)) {
        throw DomainError(fmt::format("loss_per_atom {} outside [0, 1]", loss_per_atom));
    }
    if (!(pulse_area_error > -1.0)) {
        throw DomainError("pulse_area_error must exceed -1");
    }
    if (!(pulse_area_jitter >= 0.0)) {
        throw DomainError("pulse_area_jitter must be non-negative");
    }
    if (!(dephasing_sigma >= 0.0) || !(dephasing_rate >= 0.0)) {
        throw DomainError("dephasing parameters must be non-negative");
    }
    if (ensemble_size < 1) {
        throw DomainError("ensemble_size must be at least 1");
    }
}

bool NoiseModel::ideal() const {
    return fill_probability == 1.0 && pulse_area_error == 0.0 && pulse_area_jitter == 0.0 &&
           dephasing_sigma == 0.0 && dephasing_rate == 0.0 && loss_per_atom == 0.0;
}

double NoiseModel::dephasing_sigma_at(double t_hold) const {
    double drift = dephasing_rate * t_hold;
    return std::sqrt(dephasing_sigma * dephasing_sigma + drift * drift);
}

double NoiseMember::pulse_error(const NoiseModel &model, std::size_t k) const {
    double eps = model.pulse_area_error;
    if (model.pulse_area_jitter > 0) {
        eps += model.pulse_area_jitter *
               CounterRng(seed, RngStream::kPulse, static_cast<uint32_t>(index)).normal_at(k);
    }
    return eps;
}

std::vector<uint8_t> sample_vacancies(std::size_t n_sites, double p_fill, uint64_t seed, std::size_t member) {
    if (!is_probability(p_fill)) {
        throw DomainError(fmt::format("fill probability {} outside [0, 1]", p_fill));
    }
    CounterRng rng(seed, RngStream::kVacancy, static_cast<uint32_t>(member));
    std::vector<uint8_t> mask(n_sites);
    for (std::size_t s = 0; s < n_sites; ++s) {
        mask[s] = rng.uniform_at(s) < p_fill ? 1 : 0;
    }
    return mask;
}

std::vector<double> apply_dephasing(const NoiseMember &member, double sigma) {
    if (!(sigma >= 0)) {
        throw DomainError("dephasing sigma must be non-negative");
    }
    std::vector<double> phases(member.dephasing_normals.size());
    for (std::size_t s = 0; s < phases.size(); ++s) {
        phases[s] = sigma * member.dephasing_normals[s];
    }
    return phases;
}

NoiseMember draw_member(const NoiseModel &model, std::size_t n_sites, std::size_t member) {
    NoiseMember m;
    m.index = member;
    m.seed = model.seed;
    m.fill_mask = sample_vacancies(n_sites, model.fill_probability, model.seed, member);
    auto sub = static_cast<uint32_t>(member);
    m.dephasing_normals.assign(n_sites, 0.0);
    if (model.dephasing_sigma > 0 || model.dephasing_rate > 0) {
        CounterRng rng(model.seed, RngStream::kDephasing, sub);
        for (std::size_t s = 0; s < n_sites; ++s) {
            m.dephasing_normals[s] = rng.normal_at(s);
        }
    }
    m.lost.assign(n_sites, 0);
    if (model.loss_per_atom > 0) {
        CounterRng rng(model.seed, RngStream::kLoss, sub);
        for (std::size_t s = 0; s < n_sites; ++s) {
            m.lost[s] = rng.uniform_at(s) < model.loss_per_atom ? 1 : 0;
        }
    }
    return m;
}

PulseSequence apply_pulse_error(const PulseSequence &seq, double eps) {
    if (!(eps > -1.0)) {
        throw DomainError("pulse area error must exceed -1");
    }
    if (eps == 0.0) {
        return seq;
    }
    std::vector<Instruction> out = seq.instructions();
    for (auto &instr : out) {
        if (auto *r = std::get_if<Rotate>(&instr)) {
            r->area *= 1.0 + eps;
        }
    }
    return PulseSequence(seq.chain(), std::move(out));
}

PulseSequence apply_member_pulse_errors(const PulseSequence &seq, const NoiseModel &model, const NoiseMember &member) {
    if (model.pulse_area_jitter == 0.0) {
        return apply_pulse_error(seq, model.pulse_area_error);
    }
    std::vector<Instruction> out = seq.instructions();
    std::size_t k = 0;
    for (auto &instr : out) {
        if (auto *r = std::get_if<Rotate>(&instr)) {
            r->area *= 1.0 + member.pulse_error(model, k++);
        }
    }
    return PulseSequence(seq.chain(), std::move(out));
}

Chain member_chain(const Chain &base, const NoiseMember &member) {
    Chain c = base;
    c.fill_mask.assign(base.n_atoms, 0);
    for (std::size_t s = 0; s < base.n_atoms; ++s) {
        c.fill_mask[s] = base.occupied(s) && member.fill_mask[s];
    }
    return c;
}

EnsembleEstimate ensemble_average(const NoiseModel &model, const std::function<MemberSample(std::size_t)> &observable) {
    model.validate();
    const std::size_t m = model.ensemble_size;
    std::vector<MemberSample> samples(m);
    parallel_for(m, [&](std::size_t i) { samples[i] = observable(i); });

    EnsembleEstimate est;
    est.members = m;
    const std::size_t k = samples.front().values.size();
    est.mean.assign(k, 0.0);
    est.stderr_.assign(k, 0.0);
    for (const auto &s : samples) {
        if (s.values.size() != k) {
            throw std::runtime_error("ensemble members returned observables of different sizes");
        }
        est.total_weight += s.weight;
        for (std::size_t j = 0; j < k; ++j) {
            est.mean[j] += s.weight * s.values[j];
        }
    }
    if (!(est.total_weight > 0)) {
        throw std::runtime_error("ensemble has zero total weight (no atoms in any member)");
    }
    for (auto &v : est.mean) {
        v /= est.total_weight;
    }
    if (m > 1) {
        // Linearized ratio-estimator variance.
        double bessel = static_cast<double>(m) / static_cast<double>(m - 1);
        for (std::size_t j = 0; j < k; ++j) {
            double acc = 0;
            for (const auto &s : samples) {
                double d = s.weight * (s.values[j] - est.mean[j]);
                acc += d * d;
            }
            est.stderr_[j] = std::sqrt(bessel * acc) / est.total_weight;
        }
    }
    return est;
}

}  // namespace latticegate
