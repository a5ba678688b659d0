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

#ifndef AHR_RECEIVER_H
#define AHR_RECEIVER_H

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ahr/fock.h"
#include "ahr/grid.h"
#include "ahr/homodyne.h"
#include "ahr/random.h"

namespace ahr {

/// BPSK alphabet {+alpha, -alpha} with real alpha > 0 and its priors.
struct SignalSpec {
    double alpha = 0.5;
    double prior_plus = 0.5;
    double prior_minus = 0.5;

    /// Throws ConfigError; priors must lie strictly inside (0, 1).
    void validate() const;
    double prior(Sign s) const {
        return s == Sign::kPlus ? prior_plus : prior_minus;
    }
    double amplitude(Sign s) const {
        return sign_value(s) * alpha;
    }
};

enum class AncillaKind { kCoherent, kFock, kCat, kSqueezed };

struct AncillaSpec {
    AncillaKind kind = AncillaKind::kCoherent;
    cplx amplitude{};  // coherent alpha or cat beta
    int photons = 0;   // fock
    Parity parity = Parity::kEven;
    double squeezing = 0;

    static AncillaSpec coherent(cplx alpha);
    static AncillaSpec fock(int n);
    static AncillaSpec cat(cplx beta, Parity parity);
    static AncillaSpec squeezed(double r);

    ModeState build(int cutoff, double leak_tol) const;
    /// Short human-readable tag, e.g. "cat(1,odd)".
    std::string label() const;
};

/// One feedforward decision: which library ancilla to inject and at which
/// beam-splitter angle.
struct StepChoice {
    std::size_t ancilla;
    double theta;
};

/// Maps (step, earlier ancilla outcomes) to the next (ancilla, theta).
///
/// The signature carries no information about the transmitted symbol, so a
/// policy can depend on it only through the outcomes it is shown.
class FeedforwardPolicy {
   public:
    FeedforwardPolicy(std::vector<AncillaSpec> library, std::size_t steps);
    virtual ~FeedforwardPolicy() = default;

    virtual std::string_view kind() const = 0;
    /// `step` is zero-based; `outcomes` holds y_1..y_step.
    virtual StepChoice choose(std::size_t step, std::span<const double> outcomes) const = 0;

    const std::vector<AncillaSpec> &library() const {
        return library_;
    }
    std::size_t steps() const {
        return steps_;
    }

   private:
    std::vector<AncillaSpec> library_;
    std::size_t steps_;
};

/// Fixed schedule; ignores history.
class ConstantPolicy : public FeedforwardPolicy {
   public:
    ConstantPolicy(std::vector<AncillaSpec> library, std::vector<StepChoice> schedule);
    /// Same ancilla and angle at every one of `steps` steps.
    ConstantPolicy(AncillaSpec ancilla, double theta, std::size_t steps);

    std::string_view kind() const override {
        return "constant";
    }
    StepChoice choose(std::size_t step, std::span<const double> outcomes) const override;

   private:
    std::vector<StepChoice> schedule_;
};

/// theta_{n+1} = theta_bar + gain * tanh(y_n); ancilla library[0] when
/// y_n >= 0 (ties included), library[1] otherwise. The first step uses
/// library[0] at theta_bar.
class ThresholdSwitchPolicy : public FeedforwardPolicy {
   public:
    ThresholdSwitchPolicy(std::vector<AncillaSpec> library, std::size_t steps, double theta_bar, double gain);

    std::string_view kind() const override {
        return "threshold-switch";
    }
    StepChoice choose(std::size_t step, std::span<const double> outcomes) const override;

   private:
    double theta_bar_;
    double gain_;
};

/// Hashes (policy_seed, step, bit patterns of the outcome history) into
/// theta in [0, pi/2] and an index into the library.
class HashRandomPolicy : public FeedforwardPolicy {
   public:
    HashRandomPolicy(std::vector<AncillaSpec> library, std::size_t steps, std::uint64_t policy_seed);

    std::string_view kind() const override {
        return "hash-random";
    }
    StepChoice choose(std::size_t step, std::span<const double> outcomes) const override;

   private:
    std::uint64_t seed_;
};

struct PolicyInfo {
    std::string_view kind;
    std::string_view description;
};

std::vector<PolicyInfo> builtin_policies();

/// x_th = ln(p(-alpha)/p(alpha)) / (4 sqrt2 alpha); decide +alpha iff x0 >= x_th.
DecisionRule threshold(const SignalSpec &spec);

enum class Estimator { kMonteCarlo, kRaoBlackwell };

std::string_view estimator_name(Estimator e);

struct ReceiverConfig {
    SignalSpec signal;
    int cutoff = kDefaultCutoff;
    double leak_tol = kDefaultLeakTol;
    QuadratureGrid grid = QuadratureGrid::standard();
    /// Null means no ancillae (N = 0).
    std::shared_ptr<const FeedforwardPolicy> policy;
    std::size_t trials = 1;
    Estimator estimator = Estimator::kRaoBlackwell;
    std::uint64_t seed = 0;
    bool stratified = false;
    int workers = 1;
};

struct Trajectory {
    Sign truth = Sign::kPlus;
    std::vector<double> thetas;
    std::vector<std::size_t> ancillae;  // library indices
    std::vector<double> outcomes;       // y_1..y_N
    std::vector<double> leakage;        // after each coupling (index 0 = signal preparation)
    /// x0 = slope * x + offset, with x the final signal quadrature.
    double slope = 1;
    double offset = 0;
    /// Threshold on x equivalent to x0 >= x_th given the outcomes.
    DecisionRule effective_rule;

    // Monte-Carlo mode.
    std::optional<double> final_x;
    std::optional<double> x0;
    std::optional<Sign> decision;

    // Variance-reduced mode.
    std::optional<ModeState> final_signal;
    std::optional<double> conditional_error;

    double max_leakage() const;
    bool wrong() const {
        return decision.has_value() && *decision != truth;
    }
};

struct BerReport {
    double estimate = 0;
    double std_error = 0;
    double ci_low = 0;
    double ci_high = 0;
    double ber0_reference = 0;
    std::size_t trials = 0;
    double max_leakage = 0;
    std::uint64_t seed = 0;
    Estimator estimator = Estimator::kRaoBlackwell;
    bool stratified = false;
};

/// The signal + N-ancilla chain with prebuilt ancilla states and sampling
/// tables. Immutable after construction; safe to share across threads.
class Receiver {
   public:
    explicit Receiver(ReceiverConfig config);

    const ReceiverConfig &config() const {
        return config_;
    }
    std::size_t steps() const {
        return config_.policy ? config_.policy->steps() : 0;
    }
    const DecisionRule &rule() const {
        return rule_;
    }

    /// One pass through the chain. `mode` selects whether the final signal is
    /// sampled (kMonteCarlo) or kept for analytic integration (kRaoBlackwell).
    Trajectory run_trajectory(Sign truth, RandomStream &rng, Estimator mode) const;
    Trajectory run_trajectory(Sign truth, RandomStream &rng) const {
        return run_trajectory(truth, rng, config_.estimator);
    }

    /// BER over config().trials trials. Trial k draws from substream
    /// (seed, k, lane); lane 0 for prior-drawn truths, lanes 1/2 for the
    /// +/- halves of a stratified trial. When `sink` is given it receives
    /// every trajectory in trial order.
    BerReport estimate_ber(std::vector<Trajectory> *sink = nullptr) const;

   private:
    ReceiverConfig config_;
    DecisionRule rule_;
    std::vector<ModeState> library_states_;
    std::shared_ptr<const QuadratureSampler> sampler_;
};

/// Convenience wrapper: override trials, estimator and seed, then estimate.
BerReport estimate_ber(ReceiverConfig config, std::size_t trials, Estimator estimator, std::uint64_t seed);

}  // namespace ahr

#endif
