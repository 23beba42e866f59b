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

#include "latticegate/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "latticegate/errors.h"
#include "latticegate/statevec.h"

namespace latticegate {

using std::numbers::pi;

namespace {

double wrap_phase(double a) {
    a = std::remainder(a, 2 * pi);
    return a <= -pi ? a + 2 * pi : a;
}

double sum_squares(std::span<const double> x, std::span<const double> y, const Eigen::Vector3d &p) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (p[0] + p[1] * std::cos(x[i] - p[2]));
        s += r * r;
    }
    return s;
}

}  // namespace

FitResult fit_sinusoid(std::span<const double> x, std::span<const double> y, const FitOptions &opts) {
    if (x.size() != y.size()) {
        throw FitError("fit_sinusoid: x and y differ in length");
    }
    const std::size_t n = x.size();
    if (n < 4) {
        throw FitError(fmt::format("fit_sinusoid needs at least 4 points, got {}", n));
    }
    // Fourier seed at the fundamental.
    double mean = 0, a = 0, b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mean += y[i];
        a += y[i] * std::cos(x[i]);
        b += y[i] * std::sin(x[i]);
    }
    mean /= static_cast<double>(n);
    a *= 2.0 / static_cast<double>(n);
    b *= 2.0 / static_cast<double>(n);
    Eigen::Vector3d p(mean, std::hypot(a, b), std::atan2(b, a));

    double cost = sum_squares(x, y, p);
    double lambda = 1e-3;
    int iter = 0;
    bool converged = false;
    const double tiny = 1e-300;
    for (; iter < opts.max_iterations; ++iter) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            double c = std::cos(x[i] - p[2]);
            double s = std::sin(x[i] - p[2]);
            Eigen::Vector3d j(1.0, c, p[1] * s);
            double r = y[i] - (p[0] + p[1] * c);
            jtj += j * j.transpose();
            jtr += j * r;
        }
        if (cost <= tiny || jtr.norm() <= 1e-15 * std::max(1.0, std::sqrt(cost))) {
            converged = true;
            break;
        }
        bool accepted = false;
        while (!accepted && lambda < 1e20) {
            Eigen::Matrix3d damped = jtj;
            for (int k = 0; k < 3; ++k) {
                damped(k, k) += lambda * (jtj(k, k) + 1e-12);
            }
            Eigen::Vector3d step = damped.ldlt().solve(jtr);
            Eigen::Vector3d trial = p + step;
            double trial_cost = sum_squares(x, y, trial);
            if (trial_cost < cost) {
                bool small = (step.array().abs() <= 1e-13 * (1.0 + p.array().abs())).all();
                double gain = cost - trial_cost;
                p = trial;
                cost = trial_cost;
                lambda = std::max(lambda / 10, 1e-12);
                accepted = true;
                if (small || gain <= 1e-15 * cost) {
                    converged = true;
                }
            } else {
                lambda *= 10;
            }
        }
        if (!accepted) {
            // No descent direction left: the current point is a minimum to machine precision.
            converged = true;
        }
        if (converged) {
            ++iter;
            break;
        }
    }
    if (!converged) {
        throw FitError(fmt::format("fit_sinusoid did not converge in {} iterations (offset {:.6g}, amplitude "
                                   "{:.6g}, phase {:.6g}, cost {:.3g})",
                                   opts.max_iterations, p[0], p[1], p[2], cost));
    }
    if (p[1] < 0) {
        p[1] = -p[1];
        p[2] += pi;
    }
    if (!(p[0] > opts.degenerate_offset)) {
        throw FitError(fmt::format("degenerate fringe: fitted offset {:.3g}", p[0]));
    }
    FitResult fit;
    fit.offset = p[0];
    fit.amplitude = p[1];
    fit.fringe_phase = wrap_phase(p[2]);
    fit.visibility = p[1] / p[0];
    fit.residual_rms = std::sqrt(cost / static_cast<double>(n));
    fit.iterations = iter;
    return fit;
}

FitResult fit_sinusoid(const FringeData &fringe, const FitOptions &opts) {
    return fit_sinusoid(fringe.alpha, fringe.p_one, opts);
}

std::vector<double> uniform_alpha_grid(std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = 2 * pi * static_cast<double>(i) / static_cast<double>(n);
    }
    return g;
}

namespace {

void check_alpha_grid(std::span<const double> alpha) {
    if (alpha.size() < 8) {
        throw std::invalid_argument(fmt::format("alpha grid needs at least 8 points, got {}", alpha.size()));
    }
    auto [lo, hi] = std::minmax_element(alpha.begin(), alpha.end());
    double n = static_cast<double>(alpha.size());
    double coverage = (*hi - *lo) * n / (n - 1);
    if (coverage < 2 * pi * (1 - 1e-9)) {
        throw std::invalid_argument("alpha grid must span a full period");
    }
}

/// Member state just before the readout, plus what is needed to finish the readout analytically.
struct PreReadout {
    Chain chain;
    std::vector<Eigen::Matrix2cd> rho;  ///< per site, dephasing applied; empty sites hold zeros
    std::vector<PositionTag> tags;
    std::vector<uint8_t> lost;
    std::size_t occupied = 0;
    std::size_t rotations = 0;  ///< rotations executed before the readout
};

PreReadout prepare_member(const ScanSetup &setup, const NoiseMember &member, const PulseSequence &seq) {
    PreReadout pr;
    pr.chain = seq.chain();
    pr.occupied = pr.chain.occupied_count();
    pr.lost = member.lost;
    pr.rho.assign(pr.chain.n_atoms, Eigen::Matrix2cd::Zero());
    if (pr.occupied == 0) {
        return pr;
    }
    EngineOptions eo;
    eo.max_atoms = setup.max_atoms;
    eo.stop_before_readout = true;
    ManyBodyState state = run(seq, setup.cal, eo);
    pr.tags = state.tags();
    const std::size_t terminal = seq.terminal_index();
    for (std::size_t i = 0; i < terminal; ++i) {
        pr.rotations += std::holds_alternative<Rotate>(seq.instructions()[i]) ? 1 : 0;
    }
    for (std::size_t a = 0; a < pr.chain.n_atoms; ++a) {
        if (!pr.chain.occupied(a)) {
            continue;
        }
        const std::size_t site[1] = {a};
        pr.rho[a] = reduced_density(state, site);
    }
    return pr;
}

void dephase(PreReadout &pr, std::span<const double> phases) {
    for (std::size_t a = 0; a < pr.rho.size(); ++a) {
        if (phases[a] != 0) {
            // diag(e^{-i d/2}, e^{i d/2}) rho diag(...)^dagger
            Complex f = std::polar(1.0, -phases[a]);
            pr.rho[a](0, 1) *= f;
            pr.rho[a](1, 0) *= std::conj(f);
        }
    }
}

Eigen::Matrix2cd readout_unitary(const PulseSequence &seq) {
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    const auto &instrs = seq.instructions();
    for (std::size_t i = seq.terminal_index() + 1; i < instrs.size(); ++i) {
        if (const auto *r = std::get_if<Rotate>(&instrs[i])) {
            u = rotation_matrix(r->area, r->axis_phase) * u;
        }
    }
    return u;
}

}  // namespace

FringeData ramsey_scan(const ScanSetup &setup, double t_hold, std::span<const double> alpha_grid) {
    check_alpha_grid(alpha_grid);
    setup.noise.validate();
    const double sigma = setup.noise.dephasing_sigma_at(t_hold);
    const std::size_t n_alpha = alpha_grid.size();

    auto observable = [&](std::size_t m) {
        NoiseMember member = draw_member(setup.noise, setup.chain.n_atoms, m);
        Chain chain = member_chain(setup.chain, member);
        MemberSample sample;
        sample.values.assign(n_alpha, 0.0);
        auto base = apply_member_pulse_errors(build_return_sequence(chain, t_hold, 0.0, setup.sequence),
                                              setup.noise, member);
        PreReadout pr = prepare_member(setup, member, base);
        sample.weight = static_cast<double>(pr.occupied);
        if (pr.occupied == 0) {
            return sample;
        }
        dephase(pr, apply_dephasing(member, sigma));
        for (std::size_t k = 0; k < n_alpha; ++k) {
            auto seq = apply_member_pulse_errors(build_return_sequence(chain, t_hold, alpha_grid[k], setup.sequence),
                                                 setup.noise, member);
            Eigen::Matrix2cd u = readout_unitary(seq);
            double total = 0;
            for (std::size_t a = 0; a < chain.n_atoms; ++a) {
                if (!chain.occupied(a)) {
                    continue;
                }
                total += pr.lost[a] ? 0.5 : (u * pr.rho[a] * u.adjoint())(1, 1).real();
            }
            sample.values[k] = total / static_cast<double>(pr.occupied);
        }
        return sample;
    };
    EnsembleEstimate est = ensemble_average(setup.noise, observable);

    FringeData fringe;
    fringe.alpha.assign(alpha_grid.begin(), alpha_grid.end());
    fringe.p_one = std::move(est.mean);
    fringe.p_one_stderr = std::move(est.stderr_);
    fringe.n_atoms = setup.chain.n_atoms;
    fringe.t_hold = t_hold;
    fringe.seed = setup.noise.seed;
    return fringe;
}

std::vector<VisibilityPoint> visibility_curve(const ScanSetup &setup, std::span<const double> t_grid,
                                              std::span<const double> alpha_grid) {
    if (t_grid.empty()) {
        throw std::invalid_argument("visibility_curve needs a non-empty hold-time grid");
    }
    std::vector<VisibilityPoint> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        FringeData f = ramsey_scan(setup, t, alpha_grid);
        out.push_back({t, phase_from_hold(t, setup.cal), fit_sinusoid(f)});
    }
    return out;
}

void InterferogramModel::validate() const {
    if (!(wavelength > 0) || !(tof > 0) || !(mass > 0) || !(envelope_width >= 0) || !(envelope_amplitude > 0)) {
        throw DomainError("interferogram model needs positive wavelength, tof, mass and envelope amplitude");
    }
}

double InterferogramModel::fringe_wavenumber() const {
    return mass * slit_separation() / (kConstants.hbar * tof);
}

double InterferogramModel::envelope(double x) const {
    // Far-field width of a Gaussian packet with position rms w: hbar tof / (2 m w).
    double width = kConstants.hbar * tof / (2 * mass * wave_packet_width());
    return envelope_amplitude * std::exp(-x * x / (2 * width * width));
}

std::vector<double> default_x_grid(const InterferogramModel &model, std::size_t points, double periods) {
    double period = 2 * pi / model.fringe_wavenumber();
    double span = periods * period;
    std::vector<double> x(points);
    for (std::size_t i = 0; i < points; ++i) {
        x[i] = -span / 2 + span * static_cast<double>(i) / static_cast<double>(points);
    }
    return x;
}

InterferencePattern interference_pattern(const ScanSetup &setup, double t_hold, std::span<const double> x_grid,
                                         const InterferogramModel &model) {
    model.validate();
    setup.noise.validate();
    if (x_grid.empty()) {
        throw std::invalid_argument("interference_pattern needs a non-empty x grid");
    }
    const double sigma = setup.noise.dephasing_sigma_at(t_hold);
    const double kappa = model.mass / (kConstants.hbar * model.tof);
    const double site_spacing = model.wavelength / 2;
    std::vector<double> env(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        env[i] = model.envelope(x_grid[i]);
    }

    auto observable = [&](std::size_t m) {
        NoiseMember member = draw_member(setup.noise, setup.chain.n_atoms, m);
        Chain chain = member_chain(setup.chain, member);
        MemberSample sample;
        sample.values.assign(x_grid.size(), 0.0);
        auto seq = apply_member_pulse_errors(build_delocalize_sequence(chain, t_hold, setup.sequence), setup.noise,
                                             member);
        PreReadout pr = prepare_member(setup, member, seq);
        sample.weight = static_cast<double>(pr.occupied);
        if (pr.occupied == 0) {
            return sample;
        }
        dephase(pr, apply_dephasing(member, sigma));
        double eps = member.pulse_error(setup.noise, pr.rotations);
        Eigen::Matrix2cd u = rotation_matrix(pi / 2 * (1 + eps), 0.0);
        for (std::size_t a = 0; a < chain.n_atoms; ++a) {
            if (!chain.occupied(a)) {
                continue;
            }
            if (pr.lost[a]) {
                for (std::size_t i = 0; i < x_grid.size(); ++i) {
                    sample.values[i] += 0.5 * env[i];
                }
                continue;
            }
            // |1>-projected single-particle density matrix over the two component positions.
            const auto &rho = pr.rho[a];
            Complex w[2][2];
            for (int s = 0; s < 2; ++s) {
                for (int t = 0; t < 2; ++t) {
                    w[s][t] = u(1, s) * rho(s, t) * std::conj(u(1, t));
                }
            }
            const auto &tag = pr.tags[a];
            int left = tag.site0 <= tag.site1 ? 0 : 1;
            int right = 1 - left;
            double sep = (tag.site_of(right) - tag.site_of(left)) * site_spacing;
            double pop = w[0][0].real() + w[1][1].real();
            Complex coh = w[left][right];
            for (std::size_t i = 0; i < x_grid.size(); ++i) {
                double fringe = 2 * (coh * std::polar(1.0, kappa * sep * x_grid[i])).real();
                sample.values[i] += env[i] * (pop + fringe);
            }
        }
        for (auto &v : sample.values) {
            v /= static_cast<double>(pr.occupied);
        }
        return sample;
    };
    EnsembleEstimate est = ensemble_average(setup.noise, observable);

    InterferencePattern pat;
    pat.x.assign(x_grid.begin(), x_grid.end());
    pat.intensity = std::move(est.mean);
    pat.intensity_stderr = std::move(est.stderr_);
    pat.t_hold = t_hold;
    pat.fringe_wavenumber = model.fringe_wavenumber();
    return pat;
}

FitResult pattern_visibility(const InterferencePattern &pattern, const InterferogramModel &model) {
    std::vector<double> u(pattern.x.size()), y(pattern.x.size());
    const double k = model.fringe_wavenumber();
    for (std::size_t i = 0; i < pattern.x.size(); ++i) {
        u[i] = k * pattern.x[i];
        y[i] = pattern.intensity[i] / model.envelope(pattern.x[i]);
    }
    return fit_sinusoid(u, y);
}

double contrast_minmax(std::span<const double> values) {
    if (values.empty()) {
        return 0;
    }
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    double den = *hi + *lo;
    return den > 0 ? (*hi - *lo) / den : 0.0;
}

std::vector<VisibilityPoint> interference_visibility_curve(const ScanSetup &setup, std::span<const double> t_grid,
                                                           std::span<const double> x_grid,
                                                           const InterferogramModel &model) {
    if (t_grid.empty()) {
        throw std::invalid_argument("interference_visibility_curve needs a non-empty hold-time grid");
    }
    std::vector<VisibilityPoint> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        auto pat = interference_pattern(setup, t, x_grid, model);
        out.push_back({t, phase_from_hold(t, setup.cal), pattern_visibility(pat, model)});
    }
    return out;
}

std::vector<std::size_t> local_maxima(std::span<const double> v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] > v[i - 1] && v[i] > v[i + 1]) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> local_minima(std::span<const double> v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] < v[i - 1] && v[i] < v[i + 1]) {
            out.push_back(i);
        }
    }
    return out;
}

void write_visibility_csv(std::ostream &out, std::span<const VisibilityPoint> points) {
    out << "t_hold_us,phase_rad,visibility,fringe_phase_rad,offset,residual_rms\n";
    for (const auto &p : points) {
        out << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", p.t_hold * 1e6, p.phase,
                           p.fit.visibility, p.fit.fringe_phase, p.fit.offset, p.fit.residual_rms);
    }
}

void write_fringe_csv(std::ostream &out, const FringeData &fringe) {
    out << "alpha_rad,p_one,p_one_stderr\n";
    for (std::size_t i = 0; i < fringe.alpha.size(); ++i) {
        out << fmt::format("{:.12g},{:.12g},{:.12g}\n", fringe.alpha[i], fringe.p_one[i], fringe.p_one_stderr[i]);
    }
}

void write_pattern_csv(std::ostream &out, const InterferencePattern &pattern) {
    out << "x_m,intensity,intensity_stderr\n";
    for (std::size_t i = 0; i < pattern.x.size(); ++i) {
        out << fmt::format("{:.12g},{:.12g},{:.12g}\n", pattern.x[i], pattern.intensity[i],
                           pattern.intensity_stderr[i]);
    }
}

}  // namespace latticegate
