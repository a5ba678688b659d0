// Copyright 2026 The ahr Authors
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

#include "ahr/analysis.h"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ahr/errors.h"
#include "ahr/stats.h"

namespace ahr {

TransformedOutcomes rotate_outcomes(double x, std::span<const double> y, std::span<const double> thetas) {
    if (y.size() != thetas.size()) {
        throw std::invalid_argument("rotate_outcomes: " + std::to_string(y.size()) + " outcomes but " +
                                    std::to_string(thetas.size()) + " angles");
    }
    std::size_t n = y.size();
    TransformedOutcomes out{x, std::vector<double>(n)};
    for (std::size_t k = n; k-- > 0;) {
        double c = std::cos(thetas[k]), s = std::sin(thetas[k]);
        double u = c * out.x0 - s * y[k];
        out.v[k] = s * out.x0 + c * y[k];
        out.x0 = u;
    }
    return out;
}

RawOutcomes unrotate_outcomes(double x0, std::span<const double> v, std::span<const double> thetas) {
    if (v.size() != thetas.size()) {
        throw std::invalid_argument("unrotate_outcomes: length mismatch");
    }
    RawOutcomes out{x0, std::vector<double>(v.size())};
    for (std::size_t k = 0; k < v.size(); ++k) {
        double c = std::cos(thetas[k]), s = std::sin(thetas[k]);
        out.y[k] = c * v[k] - s * out.x;
        out.x = c * out.x + s * v[k];
    }
    return out;
}

double gaussian_quadrature_density(double x, double mean) {
    double d = x - mean;
    return std::exp(-d * d) / std::sqrt(std::numbers::pi);
}

double ber_homodyne_limit(const SignalSpec &spec) {
    double x_th = threshold(spec).x_th;
    double mu = std::numbers::sqrt2 * spec.alpha;
    // P(x < x_th | +alpha) and P(x >= x_th | -alpha) for density e^{-(x-mu)^2}/sqrt(pi).
    double q_plus = 0.5 * std::erfc(mu - x_th);
    double q_minus = 0.5 * std::erfc(x_th + mu);
    return spec.prior_plus * q_plus + spec.prior_minus * q_minus;
}

double coherent_oracle_density(double s, std::span<const cplx> gammas, std::span<const double> thetas, double x,
                               std::span<const double> y) {
    if (gammas.size() != thetas.size() || y.size() != thetas.size()) {
        throw std::invalid_argument("coherent_oracle_density: length mismatch");
    }
    cplx sig = s;
    double density = 1.0;
    for (std::size_t n = 0; n < thetas.size(); ++n) {
        double c = std::cos(thetas[n]), sn = std::sin(thetas[n]);
        cplx next = c * sig + sn * gammas[n];
        cplx anc = -sn * sig + c * gammas[n];
        density *= gaussian_quadrature_density(y[n], std::numbers::sqrt2 * anc.real());
        sig = next;
    }
    return density * gaussian_quadrature_density(x, std::numbers::sqrt2 * sig.real());
}

CoherentPairTerms coherent_pair_terms(double s, std::span<const cplx> alphas, std::span<const cplx> betas,
                                      std::span<const double> thetas) {
    if (alphas.size() != thetas.size() || betas.size() != thetas.size()) {
        throw std::invalid_argument("coherent_pair_terms: length mismatch");
    }
    CoherentPairTerms t{0.0, 0.0, std::vector<cplx>(thetas.size())};
    cplx sa = s, sb = s;
    for (std::size_t n = 0; n < thetas.size(); ++n) {
        double c = std::cos(thetas[n]), sn = std::sin(thetas[n]);
        cplx a = alphas[n], b = betas[n];
        t.j += 0.5 * ((std::conj(a) * b - std::conj(b) * a) - std::norm(a - b));
        cplx anc_a = -sn * sa + c * a;
        cplx anc_b = -sn * sb + c * b;
        t.alpha2[n] = (std::conj(anc_a) + anc_b) / std::numbers::sqrt2;
        sa = c * sa + sn * a;
        sb = c * sb + sn * b;
    }
    t.s2 = (std::conj(sa) + sb) / std::numbers::sqrt2;
    return t;
}

TwoPortPairTerms two_port_pair_terms(double s, cplx alpha, cplx beta, const U2Params &u) {
    double c = std::cos(u.theta), sn = std::sin(u.theta);
    cplx g = std::polar(1.0, u.delta);
    cplx u00 = g * std::polar(c, u.phi + u.chi);
    cplx u01 = g * std::polar(sn, u.phi - u.chi);
    cplx u10 = -g * std::polar(sn, -(u.phi - u.chi));
    cplx u11 = g * std::polar(c, -(u.phi + u.chi));
    auto out_signal = [&](cplx a) { return u00 * s + u01 * a; };
    auto out_ancilla = [&](cplx a) { return u10 * s + u11 * a; };
    cplx e0 = std::polar(1.0, u.phi0), e1 = std::polar(1.0, u.phi1);
    TwoPortPairTerms t;
    t.k = 0.5 * (std::conj(alpha) * beta - alpha * std::conj(beta)) - 0.5 * std::norm(alpha - beta);
    t.s2 = (std::conj(out_signal(alpha) * e0) + out_signal(beta) * e0) / std::numbers::sqrt2;
    t.alpha2 = (std::conj(out_ancilla(alpha) * e1) + out_ancilla(beta) * e1) / std::numbers::sqrt2;
    return t;
}

cplx pair_integrand(const CoherentPairTerms &terms, double x, std::span<const double> y) {
    if (y.size() != terms.alpha2.size()) {
        throw std::invalid_argument("pair_integrand: length mismatch");
    }
    cplx e = terms.j - (x - terms.s2) * (x - terms.s2);
    for (std::size_t n = 0; n < y.size(); ++n) {
        e -= (y[n] - terms.alpha2[n]) * (y[n] - terms.alpha2[n]);
    }
    return std::exp(e) / std::pow(std::numbers::pi, 0.5 * static_cast<double>(y.size() + 1));
}

double two_port_threshold_error(const TwoModeState &output, Sign truth, double theta, double x_th, double phi0,
                                double phi1, const HermiteTable &y_table) {
    const int d = output.cutoff();
    if (y_table.dim() < d) {
        throw CutoffError("two_port_threshold_error: Hermite table smaller than cutoff");
    }
    int rows = 0, cols = 0;
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            if (std::norm(output(m, n)) > 1e-30) {
                rows = std::max(rows, m + 1);
                cols = std::max(cols, n + 1);
            }
        }
    }
    const auto &grid = y_table.grid();
    const double c = std::cos(theta), sn = std::sin(theta);
    std::vector<cplx> weighted(static_cast<std::size_t>(rows) * cols);
    for (int m = 0; m < rows; ++m) {
        for (int n = 0; n < cols; ++n) {
            weighted[static_cast<std::size_t>(m) * cols + n] = output(m, n) * std::polar(1.0, phi1 * n + phi0 * m);
        }
    }
    double err = 0, mass = 0;
    std::vector<cplx> b(rows);
    for (int i = 0; i < grid.points(); ++i) {
        double w = (i == 0 || i == grid.points() - 1) ? 0.5 : 1.0;
        double y = grid.node(i);
        auto chi = y_table.at_node(i);
        double total = 0;
        for (int m = 0; m < rows; ++m) {
            cplx acc = 0;
            const cplx *row = weighted.data() + static_cast<std::size_t>(m) * cols;
            for (int n = 0; n < cols; ++n) {
                acc += row[n] * chi[n];
            }
            b[m] = acc;
            total += std::norm(acc);
        }
        mass += w * total;
        if (total < 1e-300) {
            continue;
        }
        // Wrong for +: x0 < x_th. Wrong for -: x0 >= x_th. x0 = c x - sn y.
        double e;
        if (c == 0.0) {
            bool plus = -sn * y >= x_th;
            e = (plus == (truth == Sign::kMinus)) ? total : 0.0;
        } else {
            ModeState cond(b);
            double x_eff = (x_th + sn * y) / c;
            bool below = (truth == Sign::kPlus) == (c > 0);
            e = below ? mass_below(cond, {}, x_eff) : mass_above(cond, {}, x_eff);
        }
        err += w * e;
    }
    double h = grid.spacing();
    if (mass * h < output.norm_squared() - kGridMassTol) {
        throw GridError("two_port_threshold_error: grid captures only " + std::to_string(mass * h) +
                        " of the ancilla-port density");
    }
    return err * h;
}

ExactBer exact_ber_n1(const ExactN1Config &config) {
    config.signal.validate();
    auto ancilla = config.ancilla.build(config.cutoff, config.leak_tol);
    HermiteTable table(config.grid, config.cutoff);
    double x_th = threshold(config.signal).x_th;
    double ber = 0;
    for (Sign s : {Sign::kPlus, Sign::kMinus}) {
        auto sig = coherent_state(config.signal.amplitude(s), config.cutoff, config.leak_tol);
        auto out = beam_splitter(tensor(sig, ancilla), BeamSplitterAngle{config.theta});
        double leak = norm_leakage(out);
        if (!(leak < config.leak_tol)) {
            throw CutoffError("exact_ber_n1: leakage " + std::to_string(leak) + " exceeds tolerance");
        }
        ber += config.signal.prior(s) * two_port_threshold_error(out, s, config.theta, x_th, 0.0, 0.0, table);
    }
    double ber0 = ber_homodyne_limit(config.signal);
    return {ber, ber0, ber - ber0};
}

FactorizationReport factorization_test(std::span<const Trajectory> trajectories, const SignalSpec &spec) {
    if (trajectories.size() < kMinFactorizationSample) {
        throw std::invalid_argument("factorization_test: need at least " + std::to_string(kMinFactorizationSample) +
                                    " trajectories, got " + std::to_string(trajectories.size()));
    }
    FactorizationReport r;
    r.samples = trajectories.size();
    r.steps = trajectories.front().outcomes.size();
    std::vector<double> residual(r.samples);
    std::vector<std::vector<double>> v(r.steps, std::vector<double>(r.samples));
    for (std::size_t k = 0; k < r.samples; ++k) {
        const auto &t = trajectories[k];
        if (!t.final_x) {
            throw std::invalid_argument("factorization_test: trajectories must come from the Monte-Carlo estimator");
        }
        if (t.outcomes.size() != r.steps) {
            throw std::invalid_argument("factorization_test: trajectories have different lengths");
        }
        auto rot = rotate_outcomes(*t.final_x, t.outcomes, t.thetas);
        residual[k] = rot.x0 - std::numbers::sqrt2 * spec.amplitude(t.truth);
        for (std::size_t n = 0; n < r.steps; ++n) {
            v[n][k] = rot.v[n];
        }
    }
    double sqrt_m = std::sqrt(static_cast<double>(r.samples));
    r.ks_statistic = stats::ks_normal(residual, 0.0, 0.5);
    r.ks_p_value = stats::kolmogorov_survival(r.ks_statistic * sqrt_m);
    r.ks_pass = r.ks_statistic < stats::kKsCritical1pct / sqrt_m;
    r.correlation_bound = 3.0 / sqrt_m;
    for (std::size_t n = 0; n < r.steps; ++n) {
        double c = stats::pearson(residual, v[n]);
        r.correlations.push_back(c);
        if (!(std::abs(c) < r.correlation_bound)) {
            r.correlation_pass = false;
        }
    }
    if (r.steps > 0) {
        auto chi = stats::chi_square_independence(residual, v[0], 10);
        r.chi2 = chi.statistic;
        r.chi2_dof = chi.dof;
        r.chi2_p_value = chi.p_value;
        r.chi2_pass = chi.p_value > 0.01;
    }
    return r;
}

double separability_check(double theta, const ModeState &a, const ModeState &b, double half_width, int points) {
    auto out = beam_splitter(tensor(a, b), BeamSplitterAngle{theta});
    int d = out.cutoff();
    double c = std::cos(theta), s = std::sin(theta);
    double h = 2.0 * half_width / (points - 1);
    std::vector<std::vector<double>> chi(points);
    for (int i = 0; i < points; ++i) {
        chi[i] = hermite_functions(-half_width + i * h, d);
    }
    double worst = 0;
    std::vector<cplx> row(d);
    for (int i = 0; i < points; ++i) {
        double x = -half_width + i * h;
        // Contract the signal index first: row[n] = sum_m c'(m, n) chi_m(x).
        for (int n = 0; n < d; ++n) {
            cplx acc = 0;
            for (int m = 0; m < d; ++m) {
                acc += out(m, n) * chi[i][m];
            }
            row[n] = acc;
        }
        for (int j = 0; j < points; ++j) {
            double y = -half_width + j * h;
            cplx amp = 0;
            for (int n = 0; n < d; ++n) {
                amp += row[n] * chi[j][n];
            }
            double p_out = std::norm(amp);
            double p_in = density_at(a, {}, x * c - y * s) * density_at(b, {}, x * s + y * c);
            worst = std::max(worst, std::abs(p_out - p_in));
        }
    }
    return worst;
}

int schmidt_rank(const TwoModeState &state, double tol) {
    int d = state.cutoff();
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            m(i, j) = state(i, j);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > tol) {
            ++rank;
        }
    }
    return rank;
}

EntanglementAmplitudes entanglement_check(double theta) {
    constexpr int kCutoff = 4;
    auto out = beam_splitter(tensor(fock_state(1, kCutoff), fock_state(0, kCutoff)), BeamSplitterAngle{theta});
    return {out(1, 0).real(), out(0, 1).real(), schmidt_rank(out)};
}

}  // namespace ahr
