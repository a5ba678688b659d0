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

#ifndef AHR_FOCK_H
#define AHR_FOCK_H

#include <complex>
#include <span>
#include <vector>

namespace ahr {

using cplx = std::complex<double>;

inline constexpr int kDefaultCutoff = 40;
inline constexpr double kDefaultLeakTol = 1e-8;

/// Pure single-mode state in the photon-number basis |0>..|D-1>.
///
/// Coefficients are stored as given; the norm deficit produced by truncation
/// is reported by norm_leakage() and never renormalized away.
class ModeState {
   public:
    explicit ModeState(std::vector<cplx> coeffs);

    int cutoff() const {
        return static_cast<int>(coeffs_.size());
    }
    std::span<const cplx> coeffs() const {
        return coeffs_;
    }
    cplx operator[](int n) const {
        return coeffs_[n];
    }
    double norm_squared() const;
    /// One past the last coefficient with |c| above `floor`.
    int support(double floor = 0.0) const;

   private:
    std::vector<cplx> coeffs_;
};

/// Pure two-mode state; index (m, n) with m the signal-port and n the
/// ancilla-port photon number, both below the shared cutoff.
class TwoModeState {
   public:
    TwoModeState(int cutoff, std::vector<cplx> coeffs);

    int cutoff() const {
        return cutoff_;
    }
    cplx operator()(int m, int n) const {
        return coeffs_[static_cast<std::size_t>(m) * cutoff_ + n];
    }
    /// Row-major storage, row = signal photon number.
    std::span<const cplx> coeffs() const {
        return coeffs_;
    }
    double norm_squared() const;
    /// Probability of each total photon number m + n (length 2D - 1).
    std::vector<double> total_photon_distribution() const;

   private:
    int cutoff_;
    std::vector<cplx> coeffs_;
};

struct BeamSplitterAngle {
    double theta;
};

/// U(2) element e^{i delta} e^{i phi sz} e^{i theta sy} e^{i chi sz} plus the
/// homodyne phases used on the signal (phi0) and ancilla (phi1) ports.
struct U2Params {
    double delta = 0;
    double phi = 0;
    double theta = 0;
    double chi = 0;
    double phi0 = 0;
    double phi1 = 0;
};

enum class Parity { kEven, kOdd };

double norm_leakage(const ModeState &state);
double norm_leakage(const TwoModeState &state);

ModeState coherent_state(cplx alpha, int cutoff = kDefaultCutoff, double leak_tol = kDefaultLeakTol);
ModeState fock_state(int n, int cutoff = kDefaultCutoff);
/// (|beta> +- |-beta>) normalized; kOdd with beta = 0 is rejected.
ModeState cat_state(cplx beta, Parity parity, int cutoff = kDefaultCutoff, double leak_tol = kDefaultLeakTol);
/// exp[(r/2)(a^2 - a^dag^2)]|0>; squeezes the x quadrature for r > 0.
ModeState squeezed_vacuum(double r, int cutoff = kDefaultCutoff, double leak_tol = kDefaultLeakTol);

TwoModeState tensor(const ModeState &a, const ModeState &b);

/// exp[theta (a0^dag a1 - a1^dag a0)], applied block by block in total
/// photon number. Blocks with m + n >= D are incomplete and are dropped; the
/// lost weight shows up in norm_leakage() of the result.
TwoModeState beam_splitter(const TwoModeState &state, BeamSplitterAngle theta);

/// Two-mode unitary whose action on coherent amplitudes is the U(2) matrix of
/// `u` (phi0 and phi1 are ignored).
TwoModeState beam_splitter_u2(const TwoModeState &state, const U2Params &u);

/// Multiplies |m, n> by exp(i (signal_phase m + ancilla_phase n)).
TwoModeState apply_mode_phases(const TwoModeState &state, double signal_phase, double ancilla_phase);

/// Overlap <a|b>.
cplx inner_product(const ModeState &a, const ModeState &b);
cplx inner_product(const TwoModeState &a, const TwoModeState &b);

}  // namespace ahr

#endif
