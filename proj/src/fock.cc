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

#include "ahr/fock.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "ahr/errors.h"

namespace ahr {

namespace {

// Blocks whose input weight is below this are not propagated; their weight is
// reported as leakage like any other dropped amplitude.
constexpr double kNegligibleBlockWeight = 1e-30;

void check_cutoff(int cutoff) {
    if (cutoff < 1) {
        throw CutoffError("cutoff must be >= 1, got " + std::to_string(cutoff));
    }
}

void check_leakage(const ModeState &state, double leak_tol, const char *what) {
    double leak = norm_leakage(state);
    if (!(leak < leak_tol)) {
        throw CutoffError(std::string(what) + ": truncation leakage " + std::to_string(leak) +
                          " exceeds tolerance at cutoff " + std::to_string(state.cutoff()));
    }
}

// Total photon number k spans a (k+1)-dimensional block {|m, k-m>}. In that
// block the generator a0^dag a1 - a1^dag a0 equals -i S T S^dag with
// S = diag(i^m) and T real symmetric tridiagonal, T[m+1][m] = sqrt((m+1)(k-m)).
// exp(theta G) = S Q exp(-i theta L) Q^T S^dag for T = Q L Q^T.
struct Block {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;
};

struct BlockTable {
    std::vector<Block> blocks;
};

Block make_block(int k) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int m = 0; m < k; ++m) {
        double e = std::sqrt(static_cast<double>(m + 1) * (k - m));
        t(m + 1, m) = e;
        t(m, m + 1) = e;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
    return {solver.eigenvectors(), solver.eigenvalues()};
}

std::shared_ptr<const BlockTable> block_table(int kmax) {
    static std::mutex mu;
    static std::shared_ptr<const BlockTable> table = std::make_shared<BlockTable>();
    std::lock_guard<std::mutex> lock(mu);
    if (static_cast<int>(table->blocks.size()) <= kmax) {
        auto grown = std::make_shared<BlockTable>(*table);
        for (int k = static_cast<int>(grown->blocks.size()); k <= kmax; ++k) {
            grown->blocks.push_back(make_block(k));
        }
        table = std::move(grown);
    }
    return table;
}

cplx i_pow(int m) {
    switch (m & 3) {
        case 0:
            return {1, 0};
        case 1:
            return {0, 1};
        case 2:
            return {-1, 0};
        default:
            return {0, -1};
    }
}

}  // namespace

ModeState::ModeState(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    check_cutoff(static_cast<int>(coeffs_.size()));
}

double ModeState::norm_squared() const {
    double s = 0;
    for (const auto &c : coeffs_) {
        s += std::norm(c);
    }
    return s;
}

int ModeState::support(double floor) const {
    int n = cutoff();
    while (n > 0 && std::abs(coeffs_[n - 1]) <= floor) {
        --n;
    }
    return n;
}

TwoModeState::TwoModeState(int cutoff, std::vector<cplx> coeffs) : cutoff_(cutoff), coeffs_(std::move(coeffs)) {
    check_cutoff(cutoff);
    if (coeffs_.size() != static_cast<std::size_t>(cutoff) * cutoff) {
        throw std::invalid_argument("two-mode coefficient count must be cutoff^2");
    }
}

double TwoModeState::norm_squared() const {
    double s = 0;
    for (const auto &c : coeffs_) {
        s += std::norm(c);
    }
    return s;
}

std::vector<double> TwoModeState::total_photon_distribution() const {
    std::vector<double> p(2 * cutoff_ - 1, 0.0);
    for (int m = 0; m < cutoff_; ++m) {
        for (int n = 0; n < cutoff_; ++n) {
            p[m + n] += std::norm((*this)(m, n));
        }
    }
    return p;
}

double norm_leakage(const ModeState &state) {
    return 1.0 - state.norm_squared();
}

double norm_leakage(const TwoModeState &state) {
    return 1.0 - state.norm_squared();
}

ModeState coherent_state(cplx alpha, int cutoff, double leak_tol) {
    check_cutoff(cutoff);
    std::vector<cplx> c(cutoff);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < cutoff; ++n) {
        c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    }
    ModeState s(std::move(c));
    check_leakage(s, leak_tol, "coherent_state");
    return s;
}

ModeState fock_state(int n, int cutoff) {
    check_cutoff(cutoff);
    if (n < 0 || n >= cutoff) {
        throw CutoffError("fock_state: photon number " + std::to_string(n) + " outside [0, " +
                          std::to_string(cutoff) + ")");
    }
    std::vector<cplx> c(cutoff);
    c[n] = 1.0;
    return ModeState(std::move(c));
}

ModeState cat_state(cplx beta, Parity parity, int cutoff, double leak_tol) {
    check_cutoff(cutoff);
    double b2 = std::norm(beta);
    bool odd = parity == Parity::kOdd;
    if (odd && b2 == 0.0) {
        throw std::invalid_argument("cat_state: odd cat with beta = 0 is not normalizable");
    }
    // 2 (1 +- e^{-2|beta|^2})
    double norm2 = odd ? -2.0 * std::expm1(-2.0 * b2) : 2.0 * (1.0 + std::exp(-2.0 * b2));
    double scale = 2.0 / std::sqrt(norm2);
    std::vector<cplx> c(cutoff);
    cplx term = std::exp(-0.5 * b2);
    for (int n = 0; n < cutoff; ++n) {
        if (n > 0) {
            term *= beta / std::sqrt(static_cast<double>(n));
        }
        if ((n % 2 == 1) == odd) {
            c[n] = term * scale;
        }
    }
    ModeState s(std::move(c));
    check_leakage(s, leak_tol, "cat_state");
    return s;
}

ModeState squeezed_vacuum(double r, int cutoff, double leak_tol) {
    check_cutoff(cutoff);
    std::vector<cplx> c(cutoff);
    double t = -std::tanh(r);
    double amp = 1.0 / std::sqrt(std::cosh(r));
    for (int k = 0; 2 * k < cutoff; ++k) {
        c[2 * k] = amp;
        amp *= t * std::sqrt((2.0 * k + 1.0) / (2.0 * k + 2.0));
    }
    ModeState s(std::move(c));
    check_leakage(s, leak_tol, "squeezed_vacuum");
    return s;
}

TwoModeState tensor(const ModeState &a, const ModeState &b) {
    if (a.cutoff() != b.cutoff()) {
        throw CutoffError("tensor: cutoff mismatch " + std::to_string(a.cutoff()) + " vs " +
                          std::to_string(b.cutoff()));
    }
    int d = a.cutoff();
    std::vector<cplx> c(static_cast<std::size_t>(d) * d);
    int sa = a.support();
    int sb = b.support();
    for (int m = 0; m < sa; ++m) {
        for (int n = 0; n < sb; ++n) {
            c[static_cast<std::size_t>(m) * d + n] = a[m] * b[n];
        }
    }
    return TwoModeState(d, std::move(c));
}

TwoModeState beam_splitter(const TwoModeState &state, BeamSplitterAngle theta) {
    int d = state.cutoff();
    auto in = state.coeffs();
    std::vector<cplx> out(in.size());

    int kmax = -1;
    std::vector<double> weight(d, 0.0);
    for (int k = 0; k < d; ++k) {
        for (int m = 0; m <= k; ++m) {
            weight[k] += std::norm(in[static_cast<std::size_t>(m) * d + (k - m)]);
        }
        if (weight[k] > kNegligibleBlockWeight) {
            kmax = k;
        }
    }
    if (kmax < 0) {
        return TwoModeState(d, std::move(out));
    }
    auto table = block_table(kmax);

    std::vector<cplx> w(kmax + 1), z(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        if (weight[k] <= kNegligibleBlockWeight) {
            continue;
        }
        const Block &blk = table->blocks[k];
        int size = k + 1;
        for (int m = 0; m < size; ++m) {
            w[m] = std::conj(i_pow(m)) * in[static_cast<std::size_t>(m) * d + (k - m)];
        }
        for (int j = 0; j < size; ++j) {
            cplx acc = 0;
            for (int m = 0; m < size; ++m) {
                acc += blk.vectors(m, j) * w[m];
            }
            double ph = -theta.theta * blk.values(j);
            z[j] = acc * cplx(std::cos(ph), std::sin(ph));
        }
        for (int m = 0; m < size; ++m) {
            cplx acc = 0;
            for (int j = 0; j < size; ++j) {
                acc += blk.vectors(m, j) * z[j];
            }
            out[static_cast<std::size_t>(m) * d + (k - m)] = i_pow(m) * acc;
        }
    }
    return TwoModeState(d, std::move(out));
}

TwoModeState apply_mode_phases(const TwoModeState &state, double signal_phase, double ancilla_phase) {
    int d = state.cutoff();
    std::vector<cplx> out(state.coeffs().begin(), state.coeffs().end());
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            out[static_cast<std::size_t>(m) * d + n] *= std::polar(1.0, signal_phase * m + ancilla_phase * n);
        }
    }
    return TwoModeState(d, std::move(out));
}

TwoModeState beam_splitter_u2(const TwoModeState &state, const U2Params &u) {
    // Right to left: e^{i chi sz}, e^{i theta sy} = R(theta), e^{i phi sz}, e^{i delta}.
    auto s = apply_mode_phases(state, u.chi, -u.chi);
    s = beam_splitter(s, BeamSplitterAngle{u.theta});
    return apply_mode_phases(s, u.phi + u.delta, -u.phi + u.delta);
}

cplx inner_product(const ModeState &a, const ModeState &b) {
    if (a.cutoff() != b.cutoff()) {
        throw CutoffError("inner_product: cutoff mismatch");
    }
    cplx s = 0;
    for (int n = 0; n < a.cutoff(); ++n) {
        s += std::conj(a[n]) * b[n];
    }
    return s;
}

cplx inner_product(const TwoModeState &a, const TwoModeState &b) {
    if (a.cutoff() != b.cutoff()) {
        throw CutoffError("inner_product: cutoff mismatch");
    }
    cplx s = 0;
    auto ca = a.coeffs();
    auto cb = b.coeffs();
    for (std::size_t i = 0; i < ca.size(); ++i) {
        s += std::conj(ca[i]) * cb[i];
    }
    return s;
}

}  // namespace ahr
