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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "ahr/analysis.h"
#include "ahr/errors.h"
#include "ahr/stats.h"

using namespace ahr;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

const QuadratureGrid &grid() {
    static const QuadratureGrid g = QuadratureGrid::standard();
    return g;
}

const HermiteTable &table() {
    static const HermiteTable t(grid(), kDefaultCutoff);
    return t;
}

DensityTable density_of(const ModeState &s, double phi = 0) {
    return outcome_pdf(quad_amplitude(s, HomodynePhase{phi}, table()));
}

std::vector<double> trapezoid_cdf(const DensityTable &d) {
    std::vector<double> cdf(d.values.size());
    double h = d.grid.spacing();
    for (std::size_t i = 1; i < cdf.size(); ++i) {
        cdf[i] = cdf[i - 1] + 0.5 * h * (d.values[i - 1] + d.values[i]);
    }
    for (double &c : cdf) {
        c /= cdf.back();
    }
    return cdf;
}

double fidelity(const ModeState &a, const ModeState &b) {
    return std::norm(inner_product(a, b)) / (a.norm_squared() * b.norm_squared());
}

}  // namespace

TEST(quad_amplitude, vacuum_pair) {
    auto vv = tensor(fock_state(0), fock_state(0));
    auto amp = quad_amplitude(vv, Port::kAncilla, {}, table());
    for (int i = 0; i < grid().points(); i += 97) {
        double x = grid().node(i);
        EXPECT_NEAR(amp.at(i, 0).real(), std::pow(pi, -0.25) * std::exp(-x * x / 2), 1e-15);
        for (int m = 1; m < kDefaultCutoff; ++m) {
            EXPECT_EQ(amp.at(i, m), cplx(0.0));
        }
    }
}

TEST(quad_amplitude, coherent_signal_peak) {
    auto st = tensor(coherent_state(0.8), cat_state(1.0, Parity::kOdd));
    auto d = outcome_pdf(quad_amplitude(st, Port::kSignal, {}, table()));
    auto peak = std::max_element(d.values.begin(), d.values.end()) - d.values.begin();
    EXPECT_NEAR(grid().node(static_cast<int>(peak)), sqrt2 * 0.8, grid().spacing());
}

TEST(quad_amplitude, phase_convention) {
    auto rotated = density_of(coherent_state(cplx(0, 0.7)), -pi / 2);
    auto plain = density_of(coherent_state(0.7));
    for (std::size_t i = 0; i < plain.values.size(); ++i) {
        EXPECT_NEAR(rotated.values[i], plain.values[i], 1e-12);
    }
}

TEST(quad_amplitude, phase_covariance) {
    const cplx alpha(0.6, 0.2);
    for (double phi : {0.4, 2.0, -1.1}) {
        auto a = density_of(coherent_state(alpha), phi);
        auto b = density_of(coherent_state(alpha * std::polar(1.0, phi)));
        double worst = 0;
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
        }
        EXPECT_LT(worst, 1e-10);
    }
}

TEST(quad_amplitude, grid_too_small) {
    QuadratureGrid narrow(-1, 1, 201);
    HermiteTable t(narrow, kDefaultCutoff);
    EXPECT_THROW(quad_amplitude(coherent_state(1.5), {}, t), GridError);
}

TEST(outcome_pdf, vacuum_gaussian) {
    auto d = density_of(fock_state(0));
    double worst = 0;
    for (int i = 0; i < grid().points(); ++i) {
        double x = grid().node(i);
        worst = std::max(worst, std::abs(d.values[i] - std::exp(-x * x) / std::sqrt(pi)));
    }
    EXPECT_LT(worst, 1e-10);
    EXPECT_NEAR(d.trapezoid_integral(), 1.0, 1e-6);
}

TEST(outcome_pdf, coherent_moments) {
    auto d = density_of(coherent_state(0.5));
    double h = grid().spacing(), m1 = 0, m2 = 0;
    for (int i = 0; i < grid().points(); ++i) {
        double x = grid().node(i);
        m1 += d.values[i] * x * h;
        m2 += d.values[i] * x * x * h;
    }
    EXPECT_NEAR(m1, sqrt2 * 0.5, 1e-6);
    EXPECT_NEAR(m2 - m1 * m1, 0.5, 1e-6);
}

TEST(outcome_pdf, even_cat_symmetric) {
    auto d = density_of(cat_state(2.0, Parity::kEven));
    int n = grid().points();
    for (int i = 0; i < n; ++i) {
        EXPECT_NEAR(d.values[i], d.values[n - 1 - i], 1e-10);
    }
}

TEST(sample_outcome, uniform_midpoint) {
    QuadratureGrid g(-3, 3, 61);
    DensityTable flat{g, std::vector<double>(61, 1.0 / 6)};
    EXPECT_NEAR(invert_cdf(flat, 0.5).value, 0.0, 1e-12);
}

TEST(sample_outcome, vacuum_moments) {
    auto d = density_of(fock_state(0));
    RandomStream rng(2024);
    constexpr int kSamples = 100000;
    std::vector<double> xs(kSamples);
    for (auto &x : xs) {
        x = sample_outcome(d, rng).value;
    }
    auto mom = stats::moments(xs);
    EXPECT_LT(std::abs(mom.mean), 4 * (1 / sqrt2) / std::sqrt(kSamples));
    EXPECT_NEAR(mom.variance, 0.5, 0.01);
}

TEST(sample_outcome, deterministic_given_stream) {
    auto d = density_of(cat_state(1.0, Parity::kOdd));
    RandomStream a(5), b(5);
    for (int k = 0; k < 100; ++k) {
        EXPECT_EQ(sample_outcome(d, a).value, sample_outcome(d, b).value);
    }
}

TEST(sampler, ks_fidelity) {
    QuadratureSampler sampler(grid(), kDefaultCutoff);
    constexpr int kSamples = 100000;
    const ModeState states[] = {fock_state(0), coherent_state(0.7), cat_state(1.0, Parity::kOdd)};
    std::uint64_t seed = 31;
    for (const auto &s : states) {
        auto d = density_of(s);
        auto cdf = trapezoid_cdf(d);
        std::vector<double> nodes(grid().points());
        for (int i = 0; i < grid().points(); ++i) {
            nodes[i] = grid().node(i);
        }
        RandomStream rng(seed++);
        std::vector<double> xs(kSamples);
        for (auto &x : xs) {
            x = sampler.sample(s, {}, rng).value;
        }
        EXPECT_LT(stats::ks_tabulated(xs, nodes, cdf), 1.95 / std::sqrt(kSamples));
    }
}

TEST(sampler, agrees_with_table_route) {
    QuadratureSampler sampler(grid(), kDefaultCutoff);
    auto st = beam_splitter(tensor(coherent_state(0.5), cat_state(1.0, Parity::kOdd)), BeamSplitterAngle{0.9});
    auto d = outcome_pdf(quad_amplitude(st, Port::kAncilla, {}, table()));
    int size = 0;
    auto rho = reduced_density(st, Port::kAncilla, {}, size);
    for (double u : {0.001, 0.2, 0.5, 0.77, 0.999}) {
        auto a = invert_cdf(d, u);
        auto b = sampler.invert(rho, size, u);
        EXPECT_NEAR(a.value, b.value, 1e-9) << u;
        EXPECT_EQ(a.grid_index, b.grid_index);
    }
}

TEST(collapse, product_state_has_no_backaction) {
    auto sig = coherent_state(0.5);
    auto st = tensor(sig, squeezed_vacuum(0.5));
    for (double y : {-1.0, 0.2, 1.7}) {
        EXPECT_NEAR(fidelity(collapse(st, Port::kAncilla, {}, y), sig), 1.0, 1e-10);
    }
}

TEST(collapse, single_photon_hand_expansion) {
    auto st = beam_splitter(tensor(fock_state(1), fock_state(0)), BeamSplitterAngle{pi / 4});
    for (double y : {-0.8, 0.3, 1.4}) {
        auto post = collapse(st, Port::kAncilla, {}, y);
        auto chi = hermite_functions(y, 2);
        double norm = std::hypot(chi[0], chi[1]);
        EXPECT_NEAR(post[0].real(), -chi[1] / norm, 1e-10);
        EXPECT_NEAR(post[1].real(), chi[0] / norm, 1e-10);
        EXPECT_NEAR(post.norm_squared(), 1.0, 1e-12);
    }
}

TEST(collapse, zero_density_outcome) {
    auto st = tensor(fock_state(0), fock_state(1));
    EXPECT_THROW(collapse(st, Port::kAncilla, {}, 0.0), ZeroDensityError);
}

TEST(error_mass, closed_forms) {
    DecisionRule rule{0.0, true};
    EXPECT_NEAR(error_mass(coherent_state(0.5), rule, Sign::kPlus), 0.5 * std::erfc(std::sqrt(0.5)), 1e-12);
    EXPECT_NEAR(error_mass(coherent_state(0.5), rule, Sign::kPlus), 0.158655, 1e-6);
    EXPECT_NEAR(error_mass(coherent_state(0.5), DecisionRule{-50.0, true}, Sign::kPlus), 0.0, 1e-15);
    EXPECT_NEAR(error_mass(cat_state(1.0, Parity::kEven), rule, Sign::kPlus), 0.5, 1e-12);
    EXPECT_NEAR(error_mass(cat_state(1.0, Parity::kEven), rule, Sign::kMinus), 0.5, 1e-12);
}

TEST(error_mass, chain_rule_over_collapses) {
    auto st = beam_splitter(tensor(coherent_state(0.5), cat_state(1.0, Parity::kOdd)), BeamSplitterAngle{pi / 4});
    QuadratureSampler sampler(grid(), kDefaultCutoff);
    RandomStream rng(77);
    constexpr int kSamples = 20000;
    std::vector<double> errs(kSamples);
    for (auto &e : errs) {
        auto y = sampler.sample(st, Port::kAncilla, {}, rng);
        e = error_mass(collapse(st, Port::kAncilla, {}, y.value), DecisionRule{0.0, true}, Sign::kPlus);
    }
    auto mom = stats::moments(errs);
    double exact = two_port_threshold_error(st, Sign::kPlus, 0.0, 0.0, 0.0, 0.0, table());
    EXPECT_LT(std::abs(mom.mean - exact), 4 * std::sqrt(mom.variance / kSamples));
}

TEST(tail_mass, complementary) {
    auto s = squeezed_vacuum(0.5);
    for (double x : {-2.0, 0.0, 0.7}) {
        EXPECT_NEAR(mass_below(s, {}, x) + mass_above(s, {}, x), s.norm_squared(), 1e-13);
    }
    EXPECT_NEAR(mass_below(s, {}, 0.0), 0.5 * s.norm_squared(), 1e-13);
}
