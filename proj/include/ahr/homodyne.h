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

#ifndef AHR_HOMODYNE_H
#define AHR_HOMODYNE_H

#include <span>
#include <vector>

#include "ahr/fock.h"
#include "ahr/grid.h"
#include "ahr/hermite.h"
#include "ahr/random.h"

namespace ahr {

enum class Port { kSignal, kAncilla };

/// Local-oscillator phase. <x(phi)|n> = e^{i n phi} chi_n(x), so that
/// <x(phi)|alpha> = <x|alpha e^{i phi}>.
struct HomodynePhase {
    double phi = 0;
};

struct HomodyneOutcome {
    double value;
    int grid_index;  // cell [node(i), node(i+1)) containing value
    double pdf_at_value;
};

enum class Sign { kPlus, kMinus };

inline double sign_value(Sign s) {
    return s == Sign::kPlus ? 1.0 : -1.0;
}

/// Threshold decision on a quadrature value. With plus_above the receiver
/// decides +alpha iff x >= x_th; otherwise iff x <= x_th.
struct DecisionRule {
    double x_th = 0;
    bool plus_above = true;
};

/// A(x_i)[m]: amplitude of the unmeasured mode's photon number m conditioned
/// on quadrature outcome x_i at each grid node.
class AmplitudeTable {
   public:
    AmplitudeTable(QuadratureGrid grid, int dim, std::vector<cplx> values);

    const QuadratureGrid &grid() const {
        return grid_;
    }
    int dim() const {
        return dim_;
    }
    cplx at(int i, int m) const {
        return values_[static_cast<std::size_t>(i) * dim_ + m];
    }
    std::span<const cplx> row(int i) const {
        return {values_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
    }

   private:
    QuadratureGrid grid_;
    int dim_;
    std::vector<cplx> values_;
};

struct DensityTable {
    QuadratureGrid grid;
    std::vector<double> values;

    double trapezoid_integral() const;
};

/// Marginal mass below which quad_amplitude reports that the grid is too small.
inline constexpr double kGridMassTol = 1e-6;
/// Densities at or below this are treated as zero by collapse().
inline constexpr double kMinDensity = 1e-200;

AmplitudeTable quad_amplitude(const TwoModeState &state, Port measured, HomodynePhase phase, const HermiteTable &table);
/// Single-mode variant; the table has one column.
AmplitudeTable quad_amplitude(const ModeState &state, HomodynePhase phase, const HermiteTable &table);

DensityTable outcome_pdf(const AmplitudeTable &amplitudes);

/// Inverse-CDF sample from the trapezoid cumulative of `density`, linear
/// inside each cell.
HomodyneOutcome sample_outcome(const DensityTable &density, RandomStream &rng);
/// Same, for a given uniform variate u in [0, 1).
HomodyneOutcome invert_cdf(const DensityTable &density, double u);

/// A(x)[m] at an arbitrary quadrature value.
std::vector<cplx> amplitude_at(const TwoModeState &state, Port measured, HomodynePhase phase, double x);
cplx amplitude_at(const ModeState &state, HomodynePhase phase, double x);
double density_at(const ModeState &state, HomodynePhase phase, double x);

/// State of the unmeasured mode after observing `outcome`, normalized.
/// Throws ZeroDensityError when the density at the outcome vanishes.
ModeState collapse(const TwoModeState &state, Port measured, HomodynePhase phase, double outcome);

/// Probability that the quadrature lies below / above x.
double mass_below(const ModeState &state, HomodynePhase phase, double x);
double mass_above(const ModeState &state, HomodynePhase phase, double x);

/// Probability of deciding wrongly under `rule` when the state measured at
/// phase 0 is `state` and the truth is `truth`. Evaluated with exact
/// cumulative integrals of Hermite-function products.
double error_mass(const ModeState &state, const DecisionRule &rule, Sign truth);

/// Inverse-CDF sampler that works from the reduced density matrix of the
/// measured mode instead of a full amplitude table. It tabulates the
/// trapezoid cumulative of every chi_n chi_n' product once, so each sample
/// costs a bisection over the grid with O(dim^2) work per probe. Gives the
/// same outcomes as sample_outcome(outcome_pdf(quad_amplitude(...))).
class QuadratureSampler {
   public:
    QuadratureSampler(const QuadratureGrid &grid, int dim);

    const QuadratureGrid &grid() const {
        return grid_;
    }
    int dim() const {
        return dim_;
    }

    HomodyneOutcome sample(const TwoModeState &state, Port measured, HomodynePhase phase, RandomStream &rng) const;
    HomodyneOutcome sample(const ModeState &state, HomodynePhase phase, RandomStream &rng) const;
    /// Sample for a given reduced density matrix (row-major, size^2) and u.
    HomodyneOutcome invert(std::span<const cplx> rho, int size, double u) const;

   private:
    QuadratureGrid grid_;
    int dim_;
    std::size_t pairs_;
    std::vector<double> cumulative_;  // [node][pair], pair (n <= n') at n'(n'+1)/2 + n
};

/// Reduced density matrix of the measured port, including the phase factors
/// e^{i (n - n') phi}. Returns the matrix and its effective size.
std::vector<cplx> reduced_density(const TwoModeState &state, Port measured, HomodynePhase phase, int &size);

}  // namespace ahr

#endif
