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
#include <cstdlib>
#include <numbers>

#include "gtest/gtest.h"

#include "latticegate/analysis.h"
#include "latticegate/errors.h"
#include "latticegate/statevec.h"

using namespace latticegate;
using std::numbers::pi;

namespace {

CalibrationModel unit_calibration() {
    CalibrationModel cal;
    cal.slope = 1e4;
    return cal;
}

double hold_for(double phi) { return phi / 1e4; }

ScanSetup setup_for(Chain chain, NoiseModel noise) {
    ScanSetup s;
    s.chain = std::move(chain);
    s.cal = unit_calibration();
    s.noise = noise;
    return s;
}

double visibility_at(const ScanSetup &s, double phi) {
    return fit_sinusoid(ramsey_scan(s, hold_for(phi), uniform_alpha_grid(16))).visibility;
}

}  // namespace

TEST(noise, validate) {
    NoiseModel m;
    EXPECT_NO_THROW(m.validate());
    EXPECT_TRUE(m.ideal());
    for (auto mutate : std::vector<std::function<void(NoiseModel &)>>{
             [](NoiseModel &n) { n.fill_probability = 1.1; },
             [](NoiseModel &n) { n.loss_per_atom = -0.1; },
             [](NoiseModel &n) { n.pulse_area_error = -1; },
             [](NoiseModel &n) { n.pulse_area_jitter = -0.1; },
             [](NoiseModel &n) { n.dephasing_sigma = -1; },
             [](NoiseModel &n) { n.dephasing_rate = -1; },
             [](NoiseModel &n) { n.ensemble_size = 0; },
         }) {
        NoiseModel bad;
        mutate(bad);
        EXPECT_THROW(bad.validate(), DomainError);
    }
}

TEST(noise, dephasing_sigma_at) {
    NoiseModel m;
    m.dephasing_sigma = 0.3;
    m.dephasing_rate = 400;
    EXPECT_DOUBLE_EQ(m.dephasing_sigma_at(0), 0.3);
    EXPECT_NEAR(m.dephasing_sigma_at(1e-3), 0.5, 1e-12);
}

TEST(noise, vacancies) {
    auto full = sample_vacancies(100, 1.0, 9);
    EXPECT_EQ(std::count(full.begin(), full.end(), 1), 100);
    auto none = sample_vacancies(100, 0.0, 9);
    EXPECT_EQ(std::count(none.begin(), none.end(), 1), 0);
    EXPECT_EQ(sample_vacancies(64, 0.6, 4, 2), sample_vacancies(64, 0.6, 4, 2));
    EXPECT_NE(sample_vacancies(64, 0.6, 4, 2), sample_vacancies(64, 0.6, 4, 3));
    EXPECT_THROW(sample_vacancies(4, 1.5, 0), DomainError);
}

TEST(noise, isolated_atom_fraction) {
    const double p = 0.7;
    const std::size_t n = 64, members = 400;
    double sum = 0, sum2 = 0;
    for (std::size_t m = 0; m < members; ++m) {
        auto mask = sample_vacancies(n, p, 11, m);
        double iso = 0;
        for (std::size_t s = 1; s + 1 < n; ++s) {
            iso += mask[s] && !mask[s - 1] && !mask[s + 1];
        }
        iso /= static_cast<double>(n - 2);
        sum += iso;
        sum2 += iso * iso;
    }
    double mean = sum / members;
    double se = std::sqrt((sum2 / members - mean * mean) / (members - 1));
    EXPECT_NEAR(mean, p * (1 - p) * (1 - p), 3 * se);
}

TEST(noise, pulse_error) {
    auto seq = build_return_sequence(Chain::filled(3), 1e-4, 0.5);
    EXPECT_TRUE(apply_pulse_error(seq, 0) == seq);
    auto scaled = apply_pulse_error(seq, 0.05);
    for (std::size_t i = 0; i < seq.instructions().size(); ++i) {
        if (const auto *r = std::get_if<Rotate>(&seq.instructions()[i])) {
            const auto &s = std::get<Rotate>(scaled.instructions()[i]);
            EXPECT_DOUBLE_EQ(s.area, r->area * 1.05);
            EXPECT_EQ(s.axis_phase, r->axis_phase);
        }
    }
    EXPECT_THROW(apply_pulse_error(seq, -1), DomainError);
}

TEST(noise, pulse_jitter_is_per_member) {
    NoiseModel m;
    m.pulse_area_jitter = 0.01;
    m.seed = 3;
    auto a = draw_member(m, 4, 0), b = draw_member(m, 4, 1);
    EXPECT_NE(a.pulse_error(m, 0), a.pulse_error(m, 1));
    EXPECT_NE(a.pulse_error(m, 0), b.pulse_error(m, 0));
    EXPECT_EQ(a.pulse_error(m, 2), draw_member(m, 4, 0).pulse_error(m, 2));
}

TEST(noise, dephasing_draws) {
    NoiseModel m;
    m.dephasing_sigma = 0.5;
    auto member = draw_member(m, 6, 2);
    auto zero = apply_dephasing(member, 0);
    for (double z : zero) {
        EXPECT_EQ(z, 0);
    }
    auto ph = apply_dephasing(member, 0.5);
    auto ph2 = apply_dephasing(member, 1.0);
    for (std::size_t s = 0; s < 6; ++s) {
        EXPECT_DOUBLE_EQ(ph2[s], 2 * ph[s]);
    }
    EXPECT_THROW(apply_dephasing(member, -1), DomainError);
}

TEST(noise, ensemble_of_one_equals_ideal_engine) {
    auto s = setup_for(Chain::filled(5), NoiseModel{});
    auto grid = uniform_alpha_grid(8);
    auto fringe = ramsey_scan(s, hold_for(1.1), grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        auto state = run(build_return_sequence(s.chain, hold_for(1.1), grid[k]), s.cal);
        EXPECT_NEAR(fringe.p_one[k], probability_one(state), 1e-13);
        EXPECT_EQ(fringe.p_one_stderr[k], 0);
    }
}

TEST(noise, ensemble_deterministic_and_thread_independent) {
    NoiseModel m;
    m.fill_probability = 0.8;
    m.dephasing_sigma = 0.4;
    m.loss_per_atom = 0.05;
    m.ensemble_size = 40;
    m.seed = 99;
    auto s = setup_for(Chain::filled(6, Boundary::kRing), m);
    auto grid = uniform_alpha_grid(8);
    setenv("LATTICEGATE_THREADS", "1", 1);
    auto a = ramsey_scan(s, hold_for(2.0), grid);
    setenv("LATTICEGATE_THREADS", "3", 1);
    auto b = ramsey_scan(s, hold_for(2.0), grid);
    unsetenv("LATTICEGATE_THREADS");
    EXPECT_EQ(a.p_one, b.p_one);
    EXPECT_EQ(a.p_one_stderr, b.p_one_stderr);
}

TEST(noise, stderr_scales_inverse_sqrt) {
    auto estimate = [](std::size_t members) {
        NoiseModel m;
        m.ensemble_size = members;
        m.seed = 5;
        return ensemble_average(m, [](std::size_t i) {
                   return MemberSample{{CounterRng(5, RngStream::kFitNoise, static_cast<uint32_t>(i)).uniform_at(0)}, 1.0};
               })
            .stderr_[0];
    };
    double ratio = estimate(100) / estimate(400);
    EXPECT_NEAR(ratio, 2.0, 0.4);
}

TEST(noise, ensemble_weights_and_failures) {
    NoiseModel m;
    m.ensemble_size = 3;
    auto est = ensemble_average(m, [](std::size_t i) { return MemberSample{{double(i)}, double(i)}; });
    EXPECT_NEAR(est.mean[0], (0 * 0 + 1 * 1 + 2 * 2) / 3.0, 1e-15);
    EXPECT_EQ(est.total_weight, 3);
    EXPECT_THROW(ensemble_average(m, [](std::size_t) { return MemberSample{{1.0}, 0.0}; }), std::runtime_error);
    EXPECT_THROW(ensemble_average(m,
                                  [](std::size_t i) -> MemberSample {
                                      if (i == 1) {
                                          throw ProtocolError("member 1");
                                      }
                                      return {{1.0}, 1.0};
                                  }),
                 ProtocolError);
}

TEST(noise, dephasing_gaussian_envelope) {
    // At phi = 0 a single atom's fringe contrast is the characteristic function exp(-sigma^2 / 2).
    for (double sigma : {0.5, 1.0}) {
        NoiseModel m;
        m.dephasing_sigma = sigma;
        m.ensemble_size = 2000;
        m.seed = 17;
        auto s = setup_for(Chain::filled(1), m);
        double v = visibility_at(s, 0);
        // Monte Carlo error of the mean of cos(sigma z): sqrt(var / M).
        double var = 0.5 * (1 + std::exp(-2 * sigma * sigma)) - std::exp(-sigma * sigma);
        EXPECT_NEAR(v, std::exp(-sigma * sigma / 2), 4 * std::sqrt(var / 2000));
    }
}

TEST(noise, dephasing_sets_the_ceiling) {
    NoiseModel m;
    m.dephasing_sigma = std::sqrt(-2 * std::log(0.55));
    m.ensemble_size = 4000;
    m.seed = 2;
    auto s = setup_for(Chain::filled(6, Boundary::kRing), m);
    EXPECT_NEAR(visibility_at(s, 2 * pi), 0.55, 0.03);
}

TEST(noise, loss_reduces_baseline_by_lost_fraction) {
    NoiseModel m;
    m.loss_per_atom = 0.05;
    m.ensemble_size = 1000;
    m.seed = 8;
    auto s = setup_for(Chain::filled(4, Boundary::kRing), m);
    // Lost atoms read 1/2 at every alpha: V = 1 - f_lost. Per-member lost fraction has std
    // sqrt(0.05 * 0.95 / 4); the ensemble mean of it, divided by sqrt(M), sets the tolerance.
    double tol = 4 * std::sqrt(0.05 * 0.95 / 4 / 1000.0);
    EXPECT_NEAR(visibility_at(s, 0), 0.95, tol);
}

TEST(noise, vacancies_restore_contrast_at_pi) {
    NoiseModel m;
    m.fill_probability = 0.9;
    m.ensemble_size = 200;
    m.seed = 4;
    auto s = setup_for(Chain::filled(12), m);
    double v = visibility_at(s, pi);
    EXPECT_GT(v, 0.01);
    EXPECT_LT(v, 0.5);
    // Any bond kills an atom's coherence at pi, so the filled chain has none.
    auto ideal = setup_for(Chain::filled(12), NoiseModel{});
    EXPECT_GT(v, visibility_at(ideal, pi));
}

TEST(noise, pulse_error_visibility_band_and_monotone) {
    double prev = -1;
    for (double eps : {0.0, 0.02, 0.05, 0.1}) {
        NoiseModel m;
        m.pulse_area_error = eps;
        auto s = setup_for(Chain::filled(8, Boundary::kRing), m);
        double v = visibility_at(s, pi);
        EXPECT_GT(v, prev);
        prev = v;
        if (eps == 0.05) {
            EXPECT_GE(v, 0.01);
            EXPECT_LE(v, 0.04);
        }
    }
}

TEST(noise, vacancies_never_bond_across_empty_sites) {
    NoiseModel m;
    m.fill_probability = 0.6;
    m.seed = 12;
    for (std::size_t k = 0; k < 50; ++k) {
        auto member = draw_member(m, 10, k);
        Chain c = member_chain(Chain::filled(10), member);
        PositionTracker tr(c);
        for (const auto &instr : build_return_sequence(c, 1e-4, 0).instructions()) {
            tr.apply(instr);
            for (const auto &contact : tr.contacts()) {
                EXPECT_TRUE(c.occupied(contact.atom_a) && c.occupied(contact.atom_b));
                EXPECT_EQ(contact.atom_b, contact.atom_a + 1);
            }
        }
    }
}

TEST(noise, member_chain_intersects_masks) {
    Chain base = Chain::filled(4);
    base.fill_mask = {1, 1, 0, 1};
    NoiseMember m;
    m.fill_mask = {1, 0, 1, 1};
    EXPECT_EQ(member_chain(base, m).fill_mask, (std::vector<uint8_t>{1, 0, 0, 1}));
}
