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

#ifndef AHR_ANALYSIS_H
#define AHR_ANALYSIS_H

#include <span>
#include <vector>

#include "ahr/fock.h"
#include "ahr/grid.h"
#include "ahr/hermite.h"
#include "ahr/homodyne.h"
#include "ahr/receiver.h"

namespace ahr {

/// Outcomes after undoing the beam-splitter rotations, x0 and v_1..v_N.
struct TransformedOutcomes {
    double x0;
    std::vector<double> v;
};

/// (u_n, v_n) = R(theta_n)^{-1} (x_n, y_n) for n = N..1 with x_N = x and
/// x_{n-1} = u_n. Orthogonal, unit Jacobian.
TransformedOutcomes rotate_outcomes(double x, std::span<const double> y, std::span<const double> thetas);

/// Inverse of rotate_outcomes: returns (x, y_1..y_N) from (x0, v).
struct RawOutcomes {
    double x;
    std::vector<double> y;
};
RawOutcomes unrotate_outcomes(double x0, std::span<const double> v, std::span<const double> thetas);

/// e^{-(x - mean)^2} / sqrt(pi): homodyne density of a coherent state with
/// real part mean / sqrt2.
double gaussian_quadrature_density(double x, double mean);

/// Bare homodyne BER with the optimal threshold; erfc(sqrt2 alpha)/2 for equal priors.
double ber_homodyne_limit(const SignalSpec &spec);

/// Joint density of (x, y_1..y_N) for coherent ancillae gamma_n, built from
/// the coherent amplitude recursion alone (no Fock-space machinery).
double coherent_oracle_density(double s, std::span<const cplx> gammas, std::span<const double> thetas, double x,
                               std::span<const double> y);

/// Exponent pieces of the coherent-state integral representation of the
/// joint density, for one pair of coherent-amplitude vectors (alpha, beta).
struct CoherentPairTerms {
    cplx j;                    // cross term J
    cplx s2;                   // s''_N
    std::vector<cplx> alpha2;  // alpha''_1..alpha''_N
};

CoherentPairTerms coherent_pair_terms(double s, std::span<const cplx> alphas, std::span<const cplx> betas,
                                      std::span<const double> thetas);

/// Two-port analogue under a U(2) beam splitter and rotated homodyne phases.
struct TwoPortPairTerms {
    cplx k;
    cplx s2;
    cplx alpha2;
};

TwoPortPairTerms two_port_pair_terms(double s, cplx alpha, cplx beta, const U2Params &u);

/// exp[J - (x - s'')^2 - sum (y_n - alpha''_n)^2] / pi^{(N+1)/2}; equals the
/// joint density when alpha = beta = the coherent ancilla amplitudes.
cplx pair_integrand(const CoherentPairTerms &terms, double x, std::span<const double> y);

/// Probability that the rule "x cos(theta) - y sin(theta) >= x_th decides +"
/// errs for a two-mode output state with the given truth. x is measured at
/// phi0 on the signal port, y at phi1 on the ancilla port. The y integral is
/// a trapezoid sum on the table grid; the x integral is exact.
double two_port_threshold_error(const TwoModeState &output, Sign truth, double theta, double x_th, double phi0,
                                double phi1, const HermiteTable &y_table);

struct ExactN1Config {
    SignalSpec signal;
    AncillaSpec ancilla;
    double theta = 0;
    int cutoff = kDefaultCutoff;
    double leak_tol = kDefaultLeakTol;
    QuadratureGrid grid = QuadratureGrid::standard();
};

struct ExactBer {
    double ber;
    double ber0;
    double difference;  // ber - ber0
};

/// Deterministic BER of a single fixed ancilla coupling by quadrature.
ExactBer exact_ber_n1(const ExactN1Config &config);

inline constexpr std::size_t kMinFactorizationSample = 10000;

struct FactorizationReport {
    std::size_t samples = 0;
    std::size_t steps = 0;
    double ks_statistic = 0;
    double ks_p_value = 0;
    bool ks_pass = false;            // at 1%
    std::vector<double> correlations;  // corr(x0, v_n)
    double correlation_bound = 0;    // 3 / sqrt(M)
    bool correlation_pass = true;
    double chi2 = 0;
    int chi2_dof = 0;
    double chi2_p_value = 1;
    bool chi2_pass = true;  // p > 0.01; true when N = 0
    bool passed() const {
        return ks_pass && correlation_pass && chi2_pass;
    }
};

/// Checks that x0 is Normal(sqrt2 s, 1/2) and independent of v on sampled
/// Monte-Carlo trajectories (which must carry final_x). x0 is recomputed
/// with rotate_outcomes from each trajectory's own thetas; the test uses the
/// residual x0 - sqrt2 s so that mixed truths can be pooled.
FactorizationReport factorization_test(std::span<const Trajectory> trajectories, const SignalSpec &spec);

/// max |P_out(x, y) - P_in(x cos - y sin, x sin + y cos)| over a square grid,
/// with P_out the quadrature density of beam_splitter(a (x) b, theta).
double separability_check(double theta, const ModeState &a, const ModeState &b, double half_width = 6.0,
                          int points = 61);

struct EntanglementAmplitudes {
    double stay;  // <1,0|B|1,0>
    double hop;   // <0,1|B|1,0>
    int schmidt_rank;
};

EntanglementAmplitudes entanglement_check(double theta);

/// Number of Schmidt coefficients above `tol`.
int schmidt_rank(const TwoModeState &state, double tol = 1e-12);

}  // namespace ahr

#endif
