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

#include "ahr/receiver.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ahr/analysis.h"
#include "ahr/errors.h"
#include "ahr/parallel.h"
#include "ahr/stats.h"

namespace ahr {

void SignalSpec::validate() const {
    if (!std::isfinite(alpha) || !(alpha > 0)) {
        throw ConfigError("alpha", "must be a finite real > 0");
    }
    if (!(prior_plus > 0 && prior_plus < 1) || !(prior_minus > 0 && prior_minus < 1)) {
        throw ConfigError("priors", "each prior must lie strictly inside (0, 1)");
    }
    if (std::abs(prior_plus + prior_minus - 1.0) > 1e-12) {
        throw ConfigError("priors", "must sum to 1");
    }
}

AncillaSpec AncillaSpec::coherent(cplx alpha) {
    AncillaSpec s;
    s.kind = AncillaKind::kCoherent;
    s.amplitude = alpha;
    return s;
}

AncillaSpec AncillaSpec::fock(int n) {
    AncillaSpec s;
    s.kind = AncillaKind::kFock;
    s.photons = n;
    return s;
}

AncillaSpec AncillaSpec::cat(cplx beta, Parity parity) {
    AncillaSpec s;
    s.kind = AncillaKind::kCat;
    s.amplitude = beta;
    s.parity = parity;
    return s;
}

AncillaSpec AncillaSpec::squeezed(double r) {
    AncillaSpec s;
    s.kind = AncillaKind::kSqueezed;
    s.squeezing = r;
    return s;
}

ModeState AncillaSpec::build(int cutoff, double leak_tol) const {
    switch (kind) {
        case AncillaKind::kCoherent:
            return coherent_state(amplitude, cutoff, leak_tol);
        case AncillaKind::kFock:
            return fock_state(photons, cutoff);
        case AncillaKind::kCat:
            return cat_state(amplitude, parity, cutoff, leak_tol);
        case AncillaKind::kSqueezed:
            return squeezed_vacuum(squeezing, cutoff, leak_tol);
    }
    throw std::logic_error("unknown ancilla kind");
}

namespace {

std::string complex_label(cplx z) {
    std::ostringstream os;
    os << z.real();
    if (z.imag() != 0) {
        os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    }
    return os.str();
}

}  // namespace

std::string AncillaSpec::label() const {
    switch (kind) {
        case AncillaKind::kCoherent:
            return "coherent(" + complex_label(amplitude) + ")";
        case AncillaKind::kFock:
            return "fock(" + std::to_string(photons) + ")";
        case AncillaKind::kCat:
            return "cat(" + complex_label(amplitude) + (parity == Parity::kOdd ? ",odd)" : ",even)");
        case AncillaKind::kSqueezed: {
            std::ostringstream os;
            os << "squeezed(" << squeezing << ")";
            return os.str();
        }
    }
    return "?";
}

FeedforwardPolicy::FeedforwardPolicy(std::vector<AncillaSpec> library, std::size_t steps)
    : library_(std::move(library)), steps_(steps) {
    if (steps_ > 0 && library_.empty()) {
        throw ConfigError("ancillae", "policy needs at least one ancilla");
    }
}

ConstantPolicy::ConstantPolicy(std::vector<AncillaSpec> library, std::vector<StepChoice> schedule)
    : FeedforwardPolicy(std::move(library), schedule.size()), schedule_(std::move(schedule)) {
    for (const auto &c : schedule_) {
        if (c.ancilla >= this->library().size()) {
            throw ConfigError("ancillae", "schedule refers to a missing ancilla");
        }
        if (!std::isfinite(c.theta)) {
            throw ConfigError("thetas", "must be finite");
        }
    }
}

ConstantPolicy::ConstantPolicy(AncillaSpec ancilla, double theta, std::size_t steps)
    : ConstantPolicy(std::vector<AncillaSpec>{ancilla}, std::vector<StepChoice>(steps, StepChoice{0, theta})) {
}

StepChoice ConstantPolicy::choose(std::size_t step, std::span<const double>) const {
    return schedule_.at(step);
}

ThresholdSwitchPolicy::ThresholdSwitchPolicy(std::vector<AncillaSpec> library, std::size_t steps, double theta_bar,
                                             double gain)
    : FeedforwardPolicy(std::move(library), steps), theta_bar_(theta_bar), gain_(gain) {
    if (this->library().size() != 2) {
        throw ConfigError("ancillae", "threshold-switch needs exactly two library ancillae");
    }
    if (!std::isfinite(theta_bar) || !std::isfinite(gain)) {
        throw ConfigError("policy", "theta_bar and gain must be finite");
    }
}

StepChoice ThresholdSwitchPolicy::choose(std::size_t step, std::span<const double> outcomes) const {
    if (step == 0 || outcomes.empty()) {
        return {0, theta_bar_};
    }
    double y = outcomes[step - 1];
    return {y >= 0 ? std::size_t{0} : std::size_t{1}, theta_bar_ + gain_ * std::tanh(y)};
}

HashRandomPolicy::HashRandomPolicy(std::vector<AncillaSpec> library, std::size_t steps, std::uint64_t policy_seed)
    : FeedforwardPolicy(std::move(library), steps), seed_(policy_seed) {
}

StepChoice HashRandomPolicy::choose(std::size_t step, std::span<const double> outcomes) const {
    std::uint64_t h = mix64(seed_ ^ mix64(step));
    for (std::size_t i = 0; i < step && i < outcomes.size(); ++i) {
        h = mix64(h ^ std::bit_cast<std::uint64_t>(outcomes[i]));
    }
    double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    std::size_t index = mix64(h ^ 0xA5A5A5A5A5A5A5A5ULL) % library().size();
    return {index, u * 0.5 * std::numbers::pi};
}

std::vector<PolicyInfo> builtin_policies() {
    return {
        {"constant", "fixed (ancilla, theta) schedule, independent of outcomes"},
        {"threshold-switch", "theta_{n+1} = theta_bar + gain*tanh(y_n); ancilla chosen by sign(y_n), ties to the first"},
        {"hash-random", "outcome history hashed with a policy seed into theta in [0, pi/2] and a library ancilla"},
    };
}

DecisionRule threshold(const SignalSpec &spec) {
    spec.validate();
    double x_th = std::log(spec.prior_minus / spec.prior_plus) / (4.0 * std::numbers::sqrt2 * spec.alpha);
    return {x_th, true};
}

std::string_view estimator_name(Estimator e) {
    return e == Estimator::kMonteCarlo ? "mc" : "rb";
}

double Trajectory::max_leakage() const {
    double m = 0;
    for (double l : leakage) {
        m = std::max(m, l);
    }
    return m;
}

Receiver::Receiver(ReceiverConfig config) : config_(std::move(config)) {
    config_.signal.validate();
    if (config_.cutoff < 1) {
        throw ConfigError("cutoff", "must be >= 1");
    }
    if (!(config_.leak_tol > 0)) {
        throw ConfigError("leak_tol", "must be > 0");
    }
    if (config_.trials < 1) {
        throw ConfigError("trials", "must be >= 1");
    }
    if (config_.workers < 1) {
        throw ConfigError("workers", "must be >= 1");
    }
    rule_ = threshold(config_.signal);
    if (config_.policy) {
        for (const auto &spec : config_.policy->library()) {
            library_states_.push_back(spec.build(config_.cutoff, config_.leak_tol));
        }
    }
    // Checks the signal amplitude against the cutoff up front.
    coherent_state(config_.signal.alpha, config_.cutoff, config_.leak_tol);
    sampler_ = std::make_shared<QuadratureSampler>(config_.grid, config_.cutoff);
}

Trajectory Receiver::run_trajectory(Sign truth, RandomStream &rng, Estimator mode) const {
    const int d = config_.cutoff;
    Trajectory t;
    t.truth = truth;
    ModeState signal = coherent_state(config_.signal.amplitude(truth), d, config_.leak_tol);
    t.leakage.push_back(norm_leakage(signal));

    // x0 = slope * x_n + offset after step n.
    double slope = 1, offset = 0;
    std::size_t n_steps = steps();
    for (std::size_t n = 0; n < n_steps; ++n) {
        StepChoice choice = config_.policy->choose(n, t.outcomes);
        if (choice.ancilla >= library_states_.size()) {
            throw std::logic_error("policy chose an ancilla outside its library");
        }
        auto mixed = beam_splitter(tensor(signal, library_states_[choice.ancilla]), BeamSplitterAngle{choice.theta});
        double leak = norm_leakage(mixed);
        t.leakage.push_back(leak);
        if (!(leak < config_.leak_tol)) {
            throw CutoffError("step " + std::to_string(n + 1) + ": leakage " + std::to_string(leak) +
                              " exceeds tolerance at cutoff " + std::to_string(d));
        }
        auto y = sampler_->sample(mixed, Port::kAncilla, {}, rng);
        signal = collapse(mixed, Port::kAncilla, {}, y.value);
        t.thetas.push_back(choice.theta);
        t.ancillae.push_back(choice.ancilla);
        t.outcomes.push_back(y.value);
        offset -= slope * std::sin(choice.theta) * y.value;
        slope *= std::cos(choice.theta);
    }
    t.slope = slope;
    t.offset = offset;

    // x0 >= x_th  <=>  slope * x >= x_th - offset
    double rhs = rule_.x_th - offset;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    if (slope > 0) {
        t.effective_rule = {rhs / slope, true};
    } else if (slope < 0) {
        t.effective_rule = {rhs / slope, false};
    } else {
        t.effective_rule = {rhs <= 0 ? -kInf : kInf, true};
    }

    if (mode == Estimator::kMonteCarlo) {
        double x = sampler_->sample(signal, {}, rng).value;
        double x0 = slope * x + offset;
        t.final_x = x;
        t.x0 = x0;
        t.decision = x0 >= rule_.x_th ? Sign::kPlus : Sign::kMinus;
    } else {
        t.conditional_error = error_mass(signal, t.effective_rule, truth);
        t.final_signal = std::move(signal);
    }
    return t;
}

namespace {

struct TrialResult {
    double value = 0;
    bool wrong = false;
    double leakage = 0;
};

}  // namespace

BerReport Receiver::estimate_ber(std::vector<Trajectory> *sink) const {
    const std::size_t m = config_.trials;
    const bool stratified = config_.stratified;
    const Estimator mode = config_.estimator;
    const std::size_t per_trial = stratified ? 2 : 1;

    std::vector<TrialResult> results(m);
    std::vector<Trajectory> kept;
    if (sink) {
        kept.resize(m * per_trial);
    }

    auto loss = [&](const Trajectory &t) {
        return mode == Estimator::kMonteCarlo ? (t.wrong() ? 1.0 : 0.0) : *t.conditional_error;
    };
    auto run_one = [&](std::size_t k) {
        TrialResult r;
        if (stratified) {
            for (Sign s : {Sign::kPlus, Sign::kMinus}) {
                auto rng = RandomStream::substream(config_.seed, k, s == Sign::kPlus ? 1 : 2);
                auto t = run_trajectory(s, rng, mode);
                r.value += config_.signal.prior(s) * loss(t);
                r.leakage = std::max(r.leakage, t.max_leakage());
                if (sink) {
                    kept[2 * k + (s == Sign::kPlus ? 0 : 1)] = std::move(t);
                }
            }
        } else {
            auto rng = RandomStream::substream(config_.seed, k, 0);
            Sign s = rng.uniform() < config_.signal.prior_plus ? Sign::kPlus : Sign::kMinus;
            auto t = run_trajectory(s, rng, mode);
            r.value = loss(t);
            r.wrong = t.wrong();
            r.leakage = t.max_leakage();
            if (sink) {
                kept[k] = std::move(t);
            }
        }
        results[k] = r;
    };

    parallel_for(m, config_.workers, run_one);

    BerReport report;
    report.trials = m;
    report.seed = config_.seed;
    report.estimator = mode;
    report.stratified = stratified;
    report.ber0_reference = ber_homodyne_limit(config_.signal);
    std::vector<double> values(m);
    std::size_t wrong = 0;
    for (std::size_t k = 0; k < m; ++k) {
        values[k] = results[k].value;
        wrong += results[k].wrong ? 1 : 0;
        report.max_leakage = std::max(report.max_leakage, results[k].leakage);
    }
    if (mode == Estimator::kMonteCarlo && !stratified) {
        double p = static_cast<double>(wrong) / static_cast<double>(m);
        report.estimate = p;
        report.std_error = std::sqrt(p * (1 - p) / static_cast<double>(m));
        auto ci = stats::wilson_interval(wrong, m);
        report.ci_low = ci.low;
        report.ci_high = ci.high;
    } else {
        auto mom = stats::moments(values);
        report.estimate = mom.mean;
        report.std_error = std::sqrt(mom.variance / static_cast<double>(m));
        double half = 1.959963984540054 * report.std_error;
        report.ci_low = std::max(0.0, mom.mean - half);
        report.ci_high = std::min(1.0, mom.mean + half);
    }
    if (sink) {
        *sink = std::move(kept);
    }
    return report;
}

BerReport estimate_ber(ReceiverConfig config, std::size_t trials, Estimator estimator, std::uint64_t seed) {
    config.trials = trials;
    config.estimator = estimator;
    config.seed = seed;
    return Receiver(std::move(config)).estimate_ber();
}

}  // namespace ahr
