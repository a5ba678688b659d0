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

#include "ahr/u2_explorer.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ahr/analysis.h"
#include "ahr/errors.h"
#include "ahr/hermite.h"
#include "ahr/homodyne.h"
#include "ahr/parallel.h"

namespace ahr {
namespace {

constexpr double kCoeffFloor = 1e-30;
constexpr double kNegligibleSlice = 1e-20;
constexpr double kBoundaryFloor = 1e-250;

TwoModeState u2_output(const ModeState &signal, const ModeState &ancilla, const U2Params &u, double leak_tol) {
    auto out = beam_splitter_u2(tensor(signal, ancilla), u);
    double leak = norm_leakage(out);
    if (!(leak < leak_tol)) {
        throw CutoffError("u2 output leakage " + std::to_string(leak) + " exceeds tolerance " +
                          std::to_string(leak_tol));
    }
    return out;
}

// Coefficients with both detection phases folded in, trimmed to the support.
struct Folded {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> w;
};

Folded fold(const TwoModeState &a, const TwoModeState &b, double phi0, double phi1) {
    int d = a.cutoff();
    Folded f;
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            if (std::norm(a(m, n)) > kCoeffFloor || std::norm(b(m, n)) > kCoeffFloor) {
                f.rows = std::max(f.rows, m + 1);
                f.cols = std::max(f.cols, n + 1);
            }
        }
    }
    f.w.resize(2 * static_cast<std::size_t>(f.rows) * f.cols);
    for (int which = 0; which < 2; ++which) {
        const TwoModeState &s = which == 0 ? a : b;
        cplx *dst = f.w.data() + static_cast<std::size_t>(which) * f.rows * f.cols;
        for (int m = 0; m < f.rows; ++m) {
            for (int n = 0; n < f.cols; ++n) {
                dst[static_cast<std::size_t>(m) * f.cols + n] = s(m, n) * std::polar(1.0, phi0 * m + phi1 * n);
            }
        }
    }
    return f;
}

double threshold_error(const std::vector<cplx> &b, double total, Sign truth, double c, double sn, double x_th,
                       double y) {
    if (c == 0.0) {
        bool plus = -sn * y >= x_th;
        return plus == (truth == Sign::kMinus) ? total : 0.0;
    }
    ModeState cond(b);
    double x_eff = (x_th + sn * y) / c;
    bool below = (truth == Sign::kPlus) == (c > 0);
    return below ? mass_below(cond, {}, x_eff) : mass_above(cond, {}, x_eff);
}

class LikelihoodRule {
   public:
    LikelihoodRule(const SignalSpec &signal, const HermiteTable &table) : signal_(signal), table_(table) {
    }

    // Error of deciding by sign(p+ |psi+(x)|^2 - p- |psi-(x)|^2) at fixed y.
    double error(const std::vector<cplx> &bp, const std::vector<cplx> &bm) const {
        const int r = static_cast<int>(bp.size());
        const auto &grid = table_.grid();
        const int points = grid.points();
        std::vector<double> d(points);
        for (int j = 0; j < points; ++j) {
            d[j] = discriminant(bp, bm, table_.at_node(j).first(r));
        }
        std::vector<double> bounds;
        std::vector<int> first_node{0};
        for (int j = 0; j + 1 < points; ++j) {
            if ((d[j] >= 0) != (d[j + 1] >= 0) && std::max(std::abs(d[j]), std::abs(d[j + 1])) > kBoundaryFloor) {
                bounds.push_back(refine(bp, bm, grid.node(j), grid.node(j + 1), d[j] >= 0));
                first_node.push_back(j + 1);
            }
        }
        first_node.push_back(points);

        ModeState sp(bp), sm(bm);
        double err = 0;
        for (std::size_t k = 0; k + 1 < first_node.size(); ++k) {
            int best = first_node[k];
            for (int j = first_node[k]; j < first_node[k + 1]; ++j) {
                if (std::abs(d[j]) > std::abs(d[best])) {
                    best = j;
                }
            }
            bool plus = d[best] >= 0;
            const ModeState &wrong = plus ? sm : sp;
            double prior = plus ? signal_.prior_minus : signal_.prior_plus;
            double mass;
            if (bounds.empty()) {
                mass = wrong.norm_squared();
            } else if (k == 0) {
                mass = mass_below(wrong, {}, bounds.front());
            } else if (k == bounds.size()) {
                mass = mass_above(wrong, {}, bounds.back());
            } else {
                mass = mass_below(wrong, {}, bounds[k]) - mass_below(wrong, {}, bounds[k - 1]);
            }
            err += prior * std::max(mass, 0.0);
        }
        return err;
    }

   private:
    double discriminant(const std::vector<cplx> &bp, const std::vector<cplx> &bm, std::span<const double> chi) const {
        cplx ap = 0, am = 0;
        for (std::size_t m = 0; m < bp.size(); ++m) {
            ap += bp[m] * chi[m];
            am += bm[m] * chi[m];
        }
        return signal_.prior_plus * std::norm(ap) - signal_.prior_minus * std::norm(am);
    }

    double refine(const std::vector<cplx> &bp, const std::vector<cplx> &bm, double lo, double hi,
                  bool lo_plus) const {
        std::vector<double> chi(bp.size());
        for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
            double mid = 0.5 * (lo + hi);
            hermite_functions(mid, chi);
            if ((discriminant(bp, bm, chi) >= 0) == lo_plus) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }

    const SignalSpec &signal_;
    const HermiteTable &table_;
};

struct PointBer {
    double fixed;
    double ml;
};

PointBer evaluate(const ScanGrid &grid, const TwoModeState &plus, const TwoModeState &minus, const U2Params &u,
                  const HermiteTable &y_table, const LikelihoodRule &ml) {
    Folded f = fold(plus, minus, u.phi0, u.phi1);
    const int r = f.rows, cols = f.cols;
    const double x_th = threshold(grid.signal).x_th;
    const double c = std::cos(u.theta), sn = std::sin(u.theta);
    const auto &yg = y_table.grid();
    std::vector<cplx> bp(r), bm(r);
    double fixed = 0, best = 0, mass_p = 0, mass_m = 0;
    for (int i = 0; i < yg.points(); ++i) {
        double w = (i == 0 || i == yg.points() - 1) ? 0.5 : 1.0;
        double y = yg.node(i);
        auto chi = y_table.at_node(i);
        double tp = 0, tm = 0;
        for (int m = 0; m < r; ++m) {
            const cplx *rp = f.w.data() + static_cast<std::size_t>(m) * cols;
            const cplx *rm = rp + static_cast<std::size_t>(r) * cols;
            cplx ap = 0, am = 0;
            for (int n = 0; n < cols; ++n) {
                ap += rp[n] * chi[n];
                am += rm[n] * chi[n];
            }
            bp[m] = ap;
            bm[m] = am;
            tp += std::norm(ap);
            tm += std::norm(am);
        }
        mass_p += w * tp;
        mass_m += w * tm;
        if (std::max(tp, tm) < kNegligibleSlice) {
            continue;
        }
        double fy = grid.signal.prior_plus * threshold_error(bp, tp, Sign::kPlus, c, sn, x_th, y) +
                    grid.signal.prior_minus * threshold_error(bm, tm, Sign::kMinus, c, sn, x_th, y);
        // Per slice the likelihood rule can never lose to the threshold rule.
        double my = std::min(ml.error(bp, bm), fy);
        fixed += w * fy;
        best += w * my;
    }
    double h = yg.spacing();
    for (double mass : {mass_p * h, mass_m * h}) {
        if (mass < 1.0 - kGridMassTol - grid.leak_tol) {
            throw GridError("scan: y grid captures only " + std::to_string(mass) + " of the probability");
        }
    }
    return {fixed * h, best * h};
}

bool all_finite(const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

double two_port_density(double s, const AncillaSpec &ancilla, const U2Params &u, double x, double y, int cutoff,
                        double leak_tol) {
    auto out = u2_output(coherent_state(s, cutoff, leak_tol), ancilla.build(cutoff, leak_tol), u, leak_tol);
    auto cx = hermite_functions(x, cutoff);
    auto cy = hermite_functions(y, cutoff);
    cplx amp = 0;
    for (int m = 0; m < cutoff; ++m) {
        cplx row = 0;
        for (int n = 0; n < cutoff; ++n) {
            row += out(m, n) * std::polar(cy[n], u.phi1 * n);
        }
        amp += row * std::polar(cx[m], u.phi0 * m);
    }
    return std::norm(amp);
}

double coherent_two_port_density(double s, cplx gamma, const U2Params &u, double x, double y) {
    auto t = two_port_pair_terms(s, gamma, gamma, u);
    cplx e = t.k - (x - t.s2) * (x - t.s2) - (y - t.alpha2) * (y - t.alpha2);
    return std::exp(e).real() / std::numbers::pi;
}

std::string_view scan_decision_name(ScanDecision d) {
    return d == ScanDecision::kFixedThreshold ? "fixed-threshold" : "2d-maximum-likelihood";
}

ScanGrid ScanGrid::defaults(SignalSpec signal) {
    ScanGrid g;
    g.signal = signal;
    g.ancillae = {AncillaSpec::coherent(0.5), AncillaSpec::cat(1.0, Parity::kOdd)};
    for (int k = 0; k < 5; ++k) {
        double turn = 2 * std::numbers::pi * k / 5;
        g.phi.push_back(turn);
        g.chi.push_back(turn);
        g.phi0.push_back(turn);
        g.phi1.push_back(turn);
        g.theta.push_back(std::numbers::pi / 2 * k / 4);
    }
    return g;
}

std::size_t ScanGrid::size() const {
    return ancillae.size() * theta.size() * phi.size() * chi.size() * phi0.size() * phi1.size();
}

void ScanGrid::validate() const {
    signal.validate();
    if (ancillae.empty()) {
        throw ConfigError("scan.ancillae", "must list at least one ancilla");
    }
    const std::pair<const char *, const std::vector<double> *> lists[] = {
        {"scan.theta", &theta}, {"scan.phi", &phi}, {"scan.chi", &chi}, {"scan.phi0", &phi0}, {"scan.phi1", &phi1}};
    for (const auto &[name, values] : lists) {
        if (values->empty()) {
            throw ConfigError(name, "must contain at least one value");
        }
        if (!all_finite(*values)) {
            throw ConfigError(name, "values must be finite");
        }
    }
    if (cutoff < 2) {
        throw ConfigError("cutoff", "must be at least 2");
    }
    if (!(leak_tol > 0 && leak_tol < 1)) {
        throw ConfigError("leak_tol", "must lie in (0, 1)");
    }
    if (size() > budget) {
        throw ConfigError("scan.budget", std::to_string(size()) + " grid points exceed the budget of " +
                                             std::to_string(budget));
    }
}

ScanRow scan_point(const ScanGrid &grid, std::size_t index) {
    ScanRow row{};
    row.index = index;
    std::size_t k = index;
    auto take = [&k](const std::vector<double> &v) {
        double value = v[k % v.size()];
        k /= v.size();
        return value;
    };
    row.u.phi1 = take(grid.phi1);
    row.u.phi0 = take(grid.phi0);
    row.u.chi = take(grid.chi);
    row.u.phi = take(grid.phi);
    row.u.theta = take(grid.theta);
    row.ancilla = k;
    return row;
}

ScanReport scan_ber(const ScanGrid &grid, ScanDecision sort_by, int workers) {
    grid.validate();
    std::vector<ModeState> ancillae;
    for (const auto &a : grid.ancillae) {
        ancillae.push_back(a.build(grid.cutoff, grid.leak_tol));
    }
    auto sp = coherent_state(grid.signal.alpha, grid.cutoff, grid.leak_tol);
    auto sm = coherent_state(-grid.signal.alpha, grid.cutoff, grid.leak_tol);
    HermiteTable y_table(grid.y_grid, grid.cutoff);
    HermiteTable x_table(grid.boundary_grid, grid.cutoff);
    LikelihoodRule ml(grid.signal, x_table);

    ScanReport report;
    report.ber0 = ber_homodyne_limit(grid.signal);
    report.sorted_by = sort_by;
    report.rows.resize(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t index) {
        ScanRow row = scan_point(grid, index);
        const auto &anc = ancillae[row.ancilla];
        auto plus = u2_output(sp, anc, row.u, grid.leak_tol);
        auto minus = u2_output(sm, anc, row.u, grid.leak_tol);
        auto ber = evaluate(grid, plus, minus, row.u, y_table, ml);
        row.ber_fixed = ber.fixed;
        row.ber_ml = ber.ml;
        row.flagged = std::min(ber.fixed, ber.ml) < report.ber0 - kScanFlagMargin;
        report.rows[index] = row;
    });
    auto key = [sort_by](const ScanRow &r) { return sort_by == ScanDecision::kFixedThreshold ? r.ber_fixed : r.ber_ml; };
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [&](const ScanRow &a, const ScanRow &b) { return key(a) < key(b); });
    return report;
}

}  // namespace ahr
