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

#ifndef AHR_U2_EXPLORER_H
#define AHR_U2_EXPLORER_H

#include <cstddef>
#include <string_view>
#include <vector>

#include "ahr/fock.h"
#include "ahr/grid.h"
#include "ahr/receiver.h"

namespace ahr {

/// |<x(phi0), y(phi1)| U (|s> (x) ancilla)>|^2, built in the Fock basis.
double two_port_density(double s, const AncillaSpec &ancilla, const U2Params &u, double x, double y,
                        int cutoff = kDefaultCutoff, double leak_tol = kDefaultLeakTol);

/// Closed-form density for a coherent ancilla gamma.
double coherent_two_port_density(double s, cplx gamma, const U2Params &u, double x, double y);

enum class ScanDecision { kFixedThreshold, kMaximumLikelihood };
std::string_view scan_decision_name(ScanDecision d);

inline constexpr std::size_t kDefaultScanBudget = 20000;
inline constexpr double kScanFlagMargin = 1e-4;

struct ScanGrid {
    SignalSpec signal;
    std::vector<AncillaSpec> ancillae;
    // delta is not scanned: it only shifts phi0 and phi1 by the same amount.
    std::vector<double> theta;
    std::vector<double> phi;
    std::vector<double> chi;
    std::vector<double> phi0;
    std::vector<double> phi1;
    std::size_t budget = kDefaultScanBudget;
    int cutoff = kDefaultCutoff;
    double leak_tol = kDefaultLeakTol;
    /// Trapezoid nodes for the ancilla outcome y.
    QuadratureGrid y_grid{-10.0, 10.0, 401};
    /// Nodes used to bracket the boundaries of the likelihood-ratio rule in x.
    QuadratureGrid boundary_grid{-10.0, 10.0, 401};

    /// Five points per parameter, coherent(0.5) and odd cat(1) ancillae.
    static ScanGrid defaults(SignalSpec signal = {});
    std::size_t size() const;
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

struct ScanRow {
    std::size_t index;    // position in enumeration order
    std::size_t ancilla;  // index into ScanGrid::ancillae
    U2Params u;
    double ber_fixed;  // decide + iff x cos(theta) - y sin(theta) >= x_th
    double ber_ml;     // pointwise likelihood-ratio rule on (x, y)
    bool flagged;      // either rule below ber0 - kScanFlagMargin
};

struct ScanReport {
    double ber0 = 0;
    ScanDecision sorted_by = ScanDecision::kFixedThreshold;
    std::vector<ScanRow> rows;
};

/// Parameters of grid point `index` in enumeration order
/// (ancilla, theta, phi, chi, phi0, phi1; last varies fastest).
ScanRow scan_point(const ScanGrid &grid, std::size_t index);

/// Exact BER of every grid point under both rules; rows sorted by the BER of
/// `sort_by`, ties in enumeration order. Output does not depend on `workers`.
ScanReport scan_ber(const ScanGrid &grid, ScanDecision sort_by, int workers = 1);

}  // namespace ahr

#endif  // AHR_U2_EXPLORER_H
