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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "ahr/analysis.h"
#include "ahr/errors.h"
#include "ahr/homodyne.h"

using namespace ahr;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

ScanGrid single(std::vector<AncillaSpec> ancillae, std::vector<double> theta) {
    ScanGrid g;
    g.ancillae = std::move(ancillae);
    g.theta = std::move(theta);
    g.phi = g.chi = g.phi0 = g.phi1 = {0.0};
    return g;
}

}  // namespace

TEST(two_port_density, identity_is_product) {
    auto anc = AncillaSpec::cat(1.0, Parity::kOdd);
    auto a = coherent_state(0.5), b = anc.build(kDefaultCutoff, kDefaultLeakTol);
    for (double x : {-1.0, 0.4}) {
        for (double y : {-0.6, 1.2}) {
            EXPECT_NEAR(two_port_density(0.5, anc, U2Params{}, x, y), density_at(a, {}, x) * density_at(b, {}, y),
                        1e-14);
        }
    }
}

TEST(two_port_density, real_splitter_reduction) {
    auto anc = AncillaSpec::fock(1);
    const double theta = 0.9;
    auto out = beam_splitter(tensor(coherent_state(-0.5), fock_state(1)), BeamSplitterAngle{theta});
    U2Params u;
    u.theta = theta;
    for (double x : {-1.3, 0.0, 0.8}) {
        for (double y : {-0.4, 1.1}) {
            auto amps = amplitude_at(out, Port::kAncilla, {}, y);
            cplx amp = amplitude_at(ModeState(amps), {}, x);
            EXPECT_NEAR(two_port_density(-0.5, anc, u, x, y), std::norm(amp), 1e-10);
        }
    }
    std::vector<cplx> g{0.3};
    std::vector<double> th{theta}, ys{0.25};
    EXPECT_NEAR(two_port_density(0.5, AncillaSpec::coherent(0.3), u, 0.6, 0.25),
                coherent_oracle_density(0.5, g, th, 0.6, ys), 1e-10);
}

TEST(two_port_density, coherent_closed_form) {
    const cplx gamma(0.4, -0.3);
    for (U2Params u : {U2Params{0.2, 0.7, 1.0, -0.4, 0.3, -1.2}, U2Params{1.3, -0.5, 0.4, 2.0, 2.5, 0.9}}) {
        for (double x : {-0.9, 0.5}) {
            for (double y : {-0.2, 1.4}) {
                EXPECT_NEAR(two_port_density(0.5, AncillaSpec::coherent(gamma), u, x, y),
                            coherent_two_port_density(0.5, gamma, u, x, y), 1e-8);
            }
        }
    }
}

TEST(scan_ber, reduces_to_exact_n1) {
    const std::vector<double> thetas{pi / 6, pi / 4, pi / 3};
    const std::vector<AncillaSpec> ancillae{AncillaSpec::cat(1.0, Parity::kOdd), AncillaSpec::squeezed(0.5)};
    auto g = single(ancillae, thetas);
    auto report = scan_ber(g, ScanDecision::kFixedThreshold);
    ASSERT_EQ(report.rows.size(), 6u);
    for (const auto &row : report.rows) {
        ExactN1Config c;
        c.ancilla = ancillae[row.ancilla];
        c.theta = row.u.theta;
        EXPECT_NEAR(row.ber_fixed, exact_ber_n1(c).ber, 1e-6);
        EXPECT_NEAR(row.ber_fixed, report.ber0, 1e-4);
        EXPECT_FALSE(row.flagged);
    }
}

TEST(scan_ber, decoupled_phase_mismatch) {
    auto g = single({AncillaSpec::coherent(0.5)}, {0.0});
    g.phi0 = {0.0, 0.6, 1.4, 2.5};
    g.phi1 = {0.0, 1.0};
    auto report = scan_ber(g, ScanDecision::kFixedThreshold);
    for (const auto &row : report.rows) {
        EXPECT_NEAR(row.ber_fixed, 0.5 * std::erfc(sqrt2 * 0.5 * std::cos(row.u.phi0)), 1e-6);
    }
}

TEST(scan_ber, matched_phases_restore_limit) {
    auto g = single({AncillaSpec::cat(1.0, Parity::kOdd)}, {0.0});
    g.phi = {0.4};
    g.chi = {0.3};
    g.phi0 = {-0.7};
    g.phi1 = {0.0, 2.0};
    for (const auto &row : scan_ber(g, ScanDecision::kFixedThreshold).rows) {
        EXPECT_NEAR(row.ber_fixed, ber_homodyne_limit(g.signal), 1e-6);
    }
}

TEST(scan_ber, likelihood_rule_never_worse) {
    ScanGrid g;
    g.ancillae = {AncillaSpec::cat(1.0, Parity::kOdd)};
    g.theta = {0.5, 1.2};
    g.phi = {0.0, 1.0};
    g.chi = {0.0, 2.0};
    g.phi0 = {0.0, 0.8};
    g.phi1 = {0.0, 1.5};
    g.signal = {0.5, 0.7, 0.3};
    auto report = scan_ber(g, ScanDecision::kMaximumLikelihood);
    ASSERT_EQ(report.rows.size(), 32u);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto &row = report.rows[i];
        EXPECT_LE(row.ber_ml, row.ber_fixed + 1e-9);
        EXPECT_EQ(row.flagged, std::min(row.ber_ml, row.ber_fixed) < report.ber0 - kScanFlagMargin);
        if (i > 0) {
            EXPECT_LE(report.rows[i - 1].ber_ml, row.ber_ml);
        }
    }
}

TEST(scan_ber, worker_count_does_not_change_output) {
    ScanGrid g;
    g.ancillae = {AncillaSpec::fock(1), AncillaSpec::coherent(0.5)};
    g.theta = {0.3, 1.0};
    g.phi = {0.0};
    g.chi = {0.0, 1.0};
    g.phi0 = {0.0, 0.5};
    g.phi1 = {0.0};
    g.y_grid = QuadratureGrid(-10, 10, 201);
    g.boundary_grid = QuadratureGrid(-10, 10, 201);
    auto a = scan_ber(g, ScanDecision::kFixedThreshold, 1);
    auto b = scan_ber(g, ScanDecision::kFixedThreshold, 3);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].index, b.rows[i].index);
        EXPECT_EQ(a.rows[i].ber_fixed, b.rows[i].ber_fixed);
        EXPECT_EQ(a.rows[i].ber_ml, b.rows[i].ber_ml);
    }
}

TEST(scan_grid, enumeration_and_budget) {
    auto g = ScanGrid::defaults();
    EXPECT_EQ(g.size(), 2u * 5 * 5 * 5 * 5 * 5);
    EXPECT_NO_THROW(g.validate());
    auto last = scan_point(g, g.size() - 1);
    EXPECT_EQ(last.ancilla, 1u);
    EXPECT_DOUBLE_EQ(last.u.theta, pi / 2);
    EXPECT_DOUBLE_EQ(last.u.phi1, 2 * pi * 4 / 5);
    auto second = scan_point(g, 1);
    EXPECT_EQ(second.ancilla, 0u);
    EXPECT_DOUBLE_EQ(second.u.phi1, 2 * pi / 5);
    EXPECT_DOUBLE_EQ(second.u.phi0, 0.0);

    g.budget = 100;
    try {
        g.validate();
        FAIL() << "budget not enforced";
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field(), "scan.budget");
    }
    g = ScanGrid::defaults();
    g.chi.clear();
    EXPECT_THROW(g.validate(), ConfigError);
}
