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

#include "ahr/homodyne.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ahr/errors.h"

namespace ahr {

namespace {

constexpr double kNegligibleWeight = 1e-30;

std::vector<cplx> phase_factors(HomodynePhase phase, int count) {
    std::vector<cplx> f(count);
    for (int n = 0; n < count; ++n) {
        f[n] = std::polar(1.0, phase.phi * n);
    }
    return f;
}

void check_table(const HermiteTable &table, int cutoff) {
    if (table.dim() < cutoff) {
        throw CutoffError("Hermite table holds " + std::to_string(table.dim()) + " functions, state needs " +
                          std::to_string(cutoff));
    }
}

void check_mass(const AmplitudeTable &amps) {
    double mass = outcome_pdf(amps).trapezoid_integral();
    if (mass < 1.0 - kGridMassTol) {
        throw GridError("quadrature grid [" + std::to_string(amps.grid().x_min()) + ", " +
                        std::to_string(amps.grid().x_max()) + "] captures only " + std::to_string(mass) +
                        " of the outcome density");
    }
}

// Support of each port: one past the last index carrying weight.
void two_mode_support(const TwoModeState &state, int &rows, int &cols) {
    int d = state.cutoff();
    rows = 0;
    cols = 0;
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            if (std::norm(state(m, n)) > kNegligibleWeight) {
                rows = std::max(rows, m + 1);
                cols = std::max(cols, n + 1);
            }
        }
    }
}

// sum_{m,m'} conj(b_m) b_m' M[m][m'] for a real symmetric M.
double quadratic_form(std::span<const cplx> b, const std::vector<double> &mat, int dim) {
    double s = 0;
    for (int m = 0; m < dim; ++m) {
        s += std::norm(b[m]) * mat[static_cast<std::size_t>(m) * dim + m];
        for (int k = m + 1; k < dim; ++k) {
            s += 2.0 * (std::conj(b[m]) * b[k]).real() * mat[static_cast<std::size_t>(m) * dim + k];
        }
    }
    return s;
}

std::vector<cplx> rotated_coeffs(const ModeState &state, HomodynePhase phase, int size) {
    std::vector<cplx> b(size);
    for (int m = 0; m < size; ++m) {
        b[m] = state[m] * std::polar(1.0, phase.phi * m);
    }
    return b;
}

}  // namespace

AmplitudeTable::AmplitudeTable(QuadratureGrid grid, int dim, std::vector<cplx> values)
    : grid_(grid), dim_(dim), values_(std::move(values)) {
}

double DensityTable::trapezoid_integral() const {
    double s = 0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        s += values[i] + values[i + 1];
    }
    return 0.5 * s * grid.spacing();
}

AmplitudeTable quad_amplitude(const TwoModeState &state, Port measured, HomodynePhase phase, const HermiteTable &table) {
    int d = state.cutoff();
    check_table(table, d);
    const auto &grid = table.grid();
    auto ph = phase_factors(phase, d);
    int rows, cols;
    two_mode_support(state, rows, cols);
    int kept = measured == Port::kAncilla ? rows : cols;
    int summed = measured == Port::kAncilla ? cols : rows;

    // Phase-weighted coefficients b[kept][summed].
    std::vector<cplx> b(static_cast<std::size_t>(kept) * summed);
    for (int k = 0; k < kept; ++k) {
        for (int s = 0; s < summed; ++s) {
            cplx c = measured == Port::kAncilla ? state(k, s) : state(s, k);
            b[static_cast<std::size_t>(k) * summed + s] = c * ph[s];
        }
    }
    std::vector<cplx> values(static_cast<std::size_t>(grid.points()) * d);
    for (int i = 0; i < grid.points(); ++i) {
        auto chi = table.at_node(i);
        for (int k = 0; k < kept; ++k) {
            cplx acc = 0;
            const cplx *bk = b.data() + static_cast<std::size_t>(k) * summed;
            for (int s = 0; s < summed; ++s) {
                acc += bk[s] * chi[s];
            }
            values[static_cast<std::size_t>(i) * d + k] = acc;
        }
    }
    AmplitudeTable amps(grid, d, std::move(values));
    check_mass(amps);
    return amps;
}

AmplitudeTable quad_amplitude(const ModeState &state, HomodynePhase phase, const HermiteTable &table) {
    check_table(table, state.cutoff());
    const auto &grid = table.grid();
    int size = state.support();
    auto b = rotated_coeffs(state, phase, size);
    std::vector<cplx> values(grid.points());
    for (int i = 0; i < grid.points(); ++i) {
        auto chi = table.at_node(i);
        cplx acc = 0;
        for (int n = 0; n < size; ++n) {
            acc += b[n] * chi[n];
        }
        values[i] = acc;
    }
    AmplitudeTable amps(grid, 1, std::move(values));
    check_mass(amps);
    return amps;
}

DensityTable outcome_pdf(const AmplitudeTable &amplitudes) {
    const auto &grid = amplitudes.grid();
    std::vector<double> p(grid.points());
    for (int i = 0; i < grid.points(); ++i) {
        double s = 0;
        for (const auto &a : amplitudes.row(i)) {
            s += std::norm(a);
        }
        p[i] = s;
    }
    return {grid, std::move(p)};
}

HomodyneOutcome invert_cdf(const DensityTable &density, double u) {
    const auto &grid = density.grid;
    const auto &p = density.values;
    double h = grid.spacing();
    std::vector<double> cdf(p.size(), 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) {
        cdf[i] = cdf[i - 1] + 0.5 * h * (p[i - 1] + p[i]);
    }
    double total = cdf.back();
    if (!(total > 0)) {
        throw GridError("density table has no mass");
    }
    double t = u * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), t);
    int i = static_cast<int>(it - cdf.begin()) - 1;
    i = std::clamp(i, 0, grid.points() - 2);
    double width = cdf[i + 1] - cdf[i];
    double frac = width > 0 ? (t - cdf[i]) / width : 0.0;
    frac = std::clamp(frac, 0.0, 1.0);
    double x = grid.node(i) + frac * h;
    return {x, i, p[i] + frac * (p[i + 1] - p[i])};
}

HomodyneOutcome sample_outcome(const DensityTable &density, RandomStream &rng) {
    return invert_cdf(density, rng.uniform());
}

std::vector<cplx> amplitude_at(const TwoModeState &state, Port measured, HomodynePhase phase, double x) {
    int d = state.cutoff();
    int rows, cols;
    two_mode_support(state, rows, cols);
    int kept = measured == Port::kAncilla ? rows : cols;
    int summed = measured == Port::kAncilla ? cols : rows;
    auto chi = hermite_functions(x, summed);
    auto ph = phase_factors(phase, summed);
    std::vector<cplx> a(d);
    for (int k = 0; k < kept; ++k) {
        cplx acc = 0;
        for (int s = 0; s < summed; ++s) {
            cplx c = measured == Port::kAncilla ? state(k, s) : state(s, k);
            acc += c * ph[s] * chi[s];
        }
        a[k] = acc;
    }
    return a;
}

cplx amplitude_at(const ModeState &state, HomodynePhase phase, double x) {
    int size = state.support();
    auto chi = hermite_functions(x, size);
    cplx acc = 0;
    for (int n = 0; n < size; ++n) {
        acc += state[n] * std::polar(1.0, phase.phi * n) * chi[n];
    }
    return acc;
}

double density_at(const ModeState &state, HomodynePhase phase, double x) {
    return std::norm(amplitude_at(state, phase, x));
}

ModeState collapse(const TwoModeState &state, Port measured, HomodynePhase phase, double outcome) {
    auto a = amplitude_at(state, measured, phase, outcome);
    double p = 0;
    for (const auto &v : a) {
        p += std::norm(v);
    }
    if (!(p > kMinDensity)) {
        throw ZeroDensityError("collapse: outcome " + std::to_string(outcome) + " has vanishing density");
    }
    double scale = 1.0 / std::sqrt(p);
    for (auto &v : a) {
        v *= scale;
    }
    return ModeState(std::move(a));
}

double mass_below(const ModeState &state, HomodynePhase phase, double x) {
    if (x == -std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    if (x == std::numeric_limits<double>::infinity()) {
        return state.norm_squared();
    }
    int size = state.support();
    if (size == 0) {
        return 0.0;
    }
    auto b = rotated_coeffs(state, phase, size);
    return quadratic_form(b, hermite_cumulative(x, size), size);
}

double mass_above(const ModeState &state, HomodynePhase phase, double x) {
    if (x == std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    if (x == -std::numeric_limits<double>::infinity()) {
        return state.norm_squared();
    }
    int size = state.support();
    if (size == 0) {
        return 0.0;
    }
    auto b = rotated_coeffs(state, phase, size);
    return quadratic_form(b, hermite_upper_cumulative(x, size), size);
}

double error_mass(const ModeState &state, const DecisionRule &rule, Sign truth) {
    bool wrong_below = (truth == Sign::kPlus) == rule.plus_above;
    return wrong_below ? mass_below(state, {}, rule.x_th) : mass_above(state, {}, rule.x_th);
}

QuadratureSampler::QuadratureSampler(const QuadratureGrid &grid, int dim)
    : grid_(grid), dim_(dim), pairs_(static_cast<std::size_t>(dim) * (dim + 1) / 2) {
    HermiteTable table(grid, dim);
    int g = grid.points();
    double h = grid.spacing();
    cumulative_.assign(static_cast<std::size_t>(g) * pairs_, 0.0);
    std::vector<double> prev(pairs_), cur(pairs_);
    auto products = [&](int i, std::vector<double> &out) {
        auto chi = table.at_node(i);
        std::size_t p = 0;
        for (int n2 = 0; n2 < dim; ++n2) {
            for (int n1 = 0; n1 <= n2; ++n1) {
                out[p++] = chi[n1] * chi[n2];
            }
        }
    };
    products(0, prev);
    for (int i = 1; i < g; ++i) {
        products(i, cur);
        const double *before = cumulative_.data() + static_cast<std::size_t>(i - 1) * pairs_;
        double *row = cumulative_.data() + static_cast<std::size_t>(i) * pairs_;
        for (std::size_t p = 0; p < pairs_; ++p) {
            row[p] = before[p] + 0.5 * h * (prev[p] + cur[p]);
        }
        std::swap(prev, cur);
    }
}

HomodyneOutcome QuadratureSampler::invert(std::span<const cplx> rho, int size, double u) const {
    if (size > dim_) {
        throw CutoffError("QuadratureSampler: state support " + std::to_string(size) + " exceeds table dimension " +
                          std::to_string(dim_));
    }
    std::size_t npairs = static_cast<std::size_t>(size) * (size + 1) / 2;
    std::vector<double> w(npairs);
    double trace = 0;
    {
        std::size_t p = 0;
        for (int n2 = 0; n2 < size; ++n2) {
            for (int n1 = 0; n1 <= n2; ++n1) {
                cplx r = rho[static_cast<std::size_t>(n1) * size + n2];
                w[p++] = n1 == n2 ? r.real() : 2.0 * r.real();
            }
            trace += rho[static_cast<std::size_t>(n2) * size + n2].real();
        }
    }
    auto cdf = [&](int i) {
        const double *row = cumulative_.data() + static_cast<std::size_t>(i) * pairs_;
        double s = 0;
        for (std::size_t p = 0; p < npairs; ++p) {
            s += w[p] * row[p];
        }
        return s;
    };
    int g = grid_.points();
    double total = cdf(g - 1);
    if (total < trace - kGridMassTol) {
        throw GridError("quadrature grid captures only " + std::to_string(total) + " of the outcome density");
    }
    double t = u * total;
    int lo = 0, hi = g - 1;
    double c_lo = 0, c_hi = total;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        double c = cdf(mid);
        if (c <= t) {
            lo = mid;
            c_lo = c;
        } else {
            hi = mid;
            c_hi = c;
        }
    }
    double width = c_hi - c_lo;
    double frac = width > 0 ? std::clamp((t - c_lo) / width, 0.0, 1.0) : 0.0;
    double x = grid_.node(lo) + frac * grid_.spacing();

    auto chi = hermite_functions(x, size);
    double pdf = 0;
    std::size_t p = 0;
    for (int n2 = 0; n2 < size; ++n2) {
        for (int n1 = 0; n1 <= n2; ++n1) {
            pdf += w[p++] * chi[n1] * chi[n2];
        }
    }
    return {x, lo, std::max(pdf, 0.0)};
}

HomodyneOutcome QuadratureSampler::sample(const TwoModeState &state, Port measured, HomodynePhase phase,
                                          RandomStream &rng) const {
    int size = 0;
    auto rho = reduced_density(state, measured, phase, size);
    return invert(rho, size, rng.uniform());
}

HomodyneOutcome QuadratureSampler::sample(const ModeState &state, HomodynePhase phase, RandomStream &rng) const {
    int size = state.support(1e-15);
    auto b = rotated_coeffs(state, phase, size);
    std::vector<cplx> rho(static_cast<std::size_t>(size) * size);
    for (int n1 = 0; n1 < size; ++n1) {
        for (int n2 = 0; n2 < size; ++n2) {
            rho[static_cast<std::size_t>(n1) * size + n2] = b[n1] * std::conj(b[n2]);
        }
    }
    return invert(rho, size, rng.uniform());
}

std::vector<cplx> reduced_density(const TwoModeState &state, Port measured, HomodynePhase phase, int &size) {
    int rows, cols;
    two_mode_support(state, rows, cols);
    int kept = measured == Port::kAncilla ? cols : rows;    // measured index range
    int traced = measured == Port::kAncilla ? rows : cols;  // summed index range
    size = kept;
    auto ph = phase_factors(phase, kept);
    std::vector<cplx> b(static_cast<std::size_t>(traced) * kept);
    for (int t = 0; t < traced; ++t) {
        for (int k = 0; k < kept; ++k) {
            cplx c = measured == Port::kAncilla ? state(t, k) : state(k, t);
            b[static_cast<std::size_t>(t) * kept + k] = c * ph[k];
        }
    }
    std::vector<cplx> rho(static_cast<std::size_t>(kept) * kept);
    for (int t = 0; t < traced; ++t) {
        const cplx *bt = b.data() + static_cast<std::size_t>(t) * kept;
        for (int n1 = 0; n1 < kept; ++n1) {
            cplx v = bt[n1];
            if (v == cplx(0)) {
                continue;
            }
            cplx *r = rho.data() + static_cast<std::size_t>(n1) * kept;
            for (int n2 = n1; n2 < kept; ++n2) {
                r[n2] += v * std::conj(bt[n2]);
            }
        }
    }
    for (int n1 = 0; n1 < kept; ++n1) {
        for (int n2 = 0; n2 < n1; ++n2) {
            rho[static_cast<std::size_t>(n1) * kept + n2] = std::conj(rho[static_cast<std::size_t>(n2) * kept + n1]);
        }
    }
    return rho;
}

}  // namespace ahr
