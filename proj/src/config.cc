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

#include "ahr/config.h"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ahr/errors.h"

namespace ahr {
namespace {

class Fields {
   public:
    Fields(const Json &obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
        if (!obj_.is_object()) {
            throw ConfigError(prefix_.empty() ? "config" : prefix_, "must be an object");
        }
    }

    std::string path(const std::string &key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

    const Json *get(const std::string &key) {
        used_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    const Json &require(const std::string &key) {
        const Json *v = get(key);
        if (!v) {
            throw ConfigError(path(key), "is required");
        }
        return *v;
    }

    double number(const std::string &key, std::optional<double> fallback = std::nullopt) {
        const Json *v = fallback ? get(key) : &require(key);
        return v ? as_number(*v, path(key)) : *fallback;
    }

    long long integer(const std::string &key, std::optional<long long> fallback = std::nullopt) {
        const Json *v = fallback ? get(key) : &require(key);
        if (!v) {
            return *fallback;
        }
        if (!v->is_number_integer()) {
            throw ConfigError(path(key), "must be an integer");
        }
        if (v->is_number_unsigned() && v->get<unsigned long long>() > 1ULL << 62) {
            throw ConfigError(path(key), "is out of range");
        }
        return v->get<long long>();
    }

    std::string text(const std::string &key, std::optional<std::string> fallback = std::nullopt) {
        const Json *v = fallback ? get(key) : &require(key);
        if (!v) {
            return *fallback;
        }
        if (!v->is_string()) {
            throw ConfigError(path(key), "must be a string");
        }
        return v->get<std::string>();
    }

    std::vector<double> numbers(const std::string &key, std::optional<std::vector<double>> fallback = std::nullopt) {
        const Json *v = fallback ? get(key) : &require(key);
        if (!v) {
            return *fallback;
        }
        return as_numbers(*v, path(key));
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!used_.count(it.key())) {
                throw ConfigError(path(it.key()), "unknown field");
            }
        }
    }

    static double as_number(const Json &v, const std::string &where) {
        if (!v.is_number()) {
            throw ConfigError(where, "must be a number");
        }
        double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw ConfigError(where, "must be finite");
        }
        return d;
    }

    static std::vector<double> as_numbers(const Json &v, const std::string &where) {
        if (!v.is_array()) {
            throw ConfigError(where, "must be an array of numbers");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
        }
        return out;
    }

   private:
    const Json &obj_;
    std::string prefix_;
    std::set<std::string> used_;
};

cplx parse_amplitude(const Json &v, const std::string &where) {
    if (v.is_array()) {
        auto parts = Fields::as_numbers(v, where);
        if (parts.size() != 2) {
            throw ConfigError(where, "complex amplitude must be [re, im]");
        }
        return {parts[0], parts[1]};
    }
    return Fields::as_number(v, where);
}

AncillaSpec parse_ancilla(const Json &v, const std::string &where, int cutoff) {
    Fields f(v, where);
    std::string kind = f.text("kind");
    AncillaSpec spec;
    if (kind == "coherent") {
        spec = AncillaSpec::coherent(parse_amplitude(f.require("amplitude"), f.path("amplitude")));
    } else if (kind == "fock") {
        long long n = f.integer("photons");
        if (n < 0 || n >= cutoff) {
            throw ConfigError(f.path("photons"), "must lie in [0, cutoff)");
        }
        spec = AncillaSpec::fock(static_cast<int>(n));
    } else if (kind == "cat") {
        cplx beta = parse_amplitude(f.require("amplitude"), f.path("amplitude"));
        std::string parity = f.text("parity", "even");
        if (parity != "even" && parity != "odd") {
            throw ConfigError(f.path("parity"), "must be \"even\" or \"odd\"");
        }
        if (parity == "odd" && beta == cplx{}) {
            throw ConfigError(f.path("amplitude"), "odd cat needs a nonzero amplitude");
        }
        spec = AncillaSpec::cat(beta, parity == "odd" ? Parity::kOdd : Parity::kEven);
    } else if (kind == "squeezed") {
        spec = AncillaSpec::squeezed(f.number("r"));
    } else {
        throw ConfigError(f.path("kind"), "unknown ancilla kind \"" + kind + "\"");
    }
    f.finish();
    return spec;
}

std::vector<AncillaSpec> parse_ancillae(const Json *v, int cutoff, std::vector<AncillaSpec> fallback) {
    if (!v) {
        return fallback;
    }
    if (!v->is_array()) {
        throw ConfigError("ancillae", "must be an array");
    }
    std::vector<AncillaSpec> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
        out.push_back(parse_ancilla((*v)[i], "ancillae[" + std::to_string(i) + "]", cutoff));
    }
    return out;
}

SignalSpec parse_signal(Fields &f) {
    SignalSpec s;
    s.alpha = f.number("alpha");
    auto priors = f.numbers("priors", std::vector<double>{0.5, 0.5});
    if (priors.size() != 2) {
        throw ConfigError("priors", "must hold exactly two values");
    }
    s.prior_plus = priors[0];
    s.prior_minus = priors[1];
    s.validate();
    return s;
}

int parse_cutoff(Fields &f) {
    long long c = f.integer("cutoff", kDefaultCutoff);
    if (c < 2 || c > 400) {
        throw ConfigError("cutoff", "must lie in [2, 400]");
    }
    return static_cast<int>(c);
}

double parse_leak_tol(Fields &f) {
    double t = f.number("leak_tol", kDefaultLeakTol);
    if (!(t > 0 && t < 1)) {
        throw ConfigError("leak_tol", "must lie in (0, 1)");
    }
    return t;
}

int parse_points(Fields &f, const std::string &key, int fallback) {
    long long p = f.integer(key, fallback);
    if (p < 3 || p % 2 == 0 || p > 1000001) {
        throw ConfigError(f.path(key), "must be an odd integer in [3, 1000001]");
    }
    return static_cast<int>(p);
}

Json signal_json(const SignalSpec &s) {
    return {{"alpha", s.alpha}, {"priors", {s.prior_plus, s.prior_minus}}};
}

Json ancillae_json(const std::vector<AncillaSpec> &list) {
    Json out = Json::array();
    for (const auto &a : list) {
        out.push_back(ancilla_to_json(a));
    }
    return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot read " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw ConfigError("config", path.string() + " is not valid JSON: " + e.what());
    }
}

Json ancilla_to_json(const AncillaSpec &spec) {
    switch (spec.kind) {
        case AncillaKind::kCoherent:
            return {{"kind", "coherent"}, {"amplitude", {spec.amplitude.real(), spec.amplitude.imag()}}};
        case AncillaKind::kFock:
            return {{"kind", "fock"}, {"photons", spec.photons}};
        case AncillaKind::kCat:
            return {{"kind", "cat"},
                    {"amplitude", {spec.amplitude.real(), spec.amplitude.imag()}},
                    {"parity", spec.parity == Parity::kOdd ? "odd" : "even"}};
        case AncillaKind::kSqueezed:
            return {{"kind", "squeezed"}, {"r", spec.squeezing}};
    }
    return {};
}

RunConfig parse_run_config(const Json &doc) {
    Fields f(doc, "");
    RunConfig rc;
    ReceiverConfig &c = rc.receiver;
    c.signal = parse_signal(f);
    c.cutoff = parse_cutoff(f);
    c.leak_tol = parse_leak_tol(f);
    if (const Json *g = f.get("grid")) {
        Fields gf(*g, "grid");
        double lo = gf.number("min", -10.0), hi = gf.number("max", 10.0);
        int points = parse_points(gf, "points", 4001);
        gf.finish();
        c.grid = QuadratureGrid(lo, hi, points);
    }
    rc.ancillae = parse_ancillae(f.get("ancillae"), c.cutoff, {});
    rc.thetas = f.numbers("thetas", std::vector<double>{});

    Json policy_json;
    static const Json kNoPolicy = Json::object();
    const Json *pj = f.get("policy");
    Fields pf(pj ? *pj : kNoPolicy, "policy");
    rc.policy_kind = pf.text("kind", "constant");
    if (rc.policy_kind == "constant") {
        policy_json = {{"kind", "constant"}};
        std::size_t n = rc.thetas.size();
        if (n > 0) {
            if (rc.ancillae.size() != 1 && rc.ancillae.size() != n) {
                throw ConfigError("ancillae", "constant policy needs one ancilla or one per angle");
            }
            std::vector<StepChoice> schedule;
            for (std::size_t k = 0; k < n; ++k) {
                schedule.push_back({rc.ancillae.size() == 1 ? 0 : k, rc.thetas[k]});
            }
            c.policy = std::make_shared<ConstantPolicy>(rc.ancillae, schedule);
        }
    } else if (rc.policy_kind == "threshold-switch" || rc.policy_kind == "hash-random") {
        long long steps = pf.integer("steps");
        if (steps < 1 || steps > 64) {
            throw ConfigError("policy.steps", "must lie in [1, 64]");
        }
        if (rc.ancillae.empty()) {
            throw ConfigError("ancillae", "feedforward policy needs an ancilla library");
        }
        auto n = static_cast<std::size_t>(steps);
        if (rc.policy_kind == "threshold-switch") {
            double theta_bar = pf.number("theta_bar", std::numbers::pi / 4);
            double gain = pf.number("gain", 0.3);
            policy_json = {{"kind", rc.policy_kind}, {"steps", steps}, {"theta_bar", theta_bar}, {"gain", gain}};
            c.policy = std::make_shared<ThresholdSwitchPolicy>(rc.ancillae, n, theta_bar, gain);
        } else {
            long long pseed = pf.integer("policy_seed", 0);
            if (pseed < 0) {
                throw ConfigError("policy.policy_seed", "must be non-negative");
            }
            policy_json = {{"kind", rc.policy_kind}, {"steps", steps}, {"policy_seed", pseed}};
            c.policy = std::make_shared<HashRandomPolicy>(rc.ancillae, n, static_cast<std::uint64_t>(pseed));
        }
    } else {
        throw ConfigError("policy.kind", "unknown policy \"" + rc.policy_kind + "\"");
    }
    pf.finish();

    long long trials = f.integer("trials", 1000);
    if (trials < 1) {
        throw ConfigError("trials", "must be >= 1");
    }
    c.trials = static_cast<std::size_t>(trials);
    std::string est = f.text("estimator", "rb");
    if (est == "mc") {
        c.estimator = Estimator::kMonteCarlo;
    } else if (est == "rb") {
        c.estimator = Estimator::kRaoBlackwell;
    } else {
        throw ConfigError("estimator", "must be \"mc\" or \"rb\"");
    }
    long long seed = f.integer("seed", 0);
    if (seed < 0) {
        throw ConfigError("seed", "must be non-negative");
    }
    c.seed = static_cast<std::uint64_t>(seed);
    if (const Json *s = f.get("stratified")) {
        if (!s->is_boolean()) {
            throw ConfigError("stratified", "must be a boolean");
        }
        c.stratified = s->get<bool>();
    }
    if (const Json *sw = f.get("sweep")) {
        Fields sf(*sw, "sweep");
        rc.sweep_alphas = sf.numbers("alphas");
        sf.finish();
        for (std::size_t i = 0; i < rc.sweep_alphas.size(); ++i) {
            if (!(rc.sweep_alphas[i] > 0)) {
                throw ConfigError("sweep.alphas[" + std::to_string(i) + "]", "must be > 0");
            }
        }
    }
    f.finish();

    rc.canonical = signal_json(c.signal);
    rc.canonical["cutoff"] = c.cutoff;
    rc.canonical["leak_tol"] = c.leak_tol;
    rc.canonical["grid"] = {{"min", c.grid.x_min()}, {"max", c.grid.x_max()}, {"points", c.grid.points()}};
    rc.canonical["ancillae"] = ancillae_json(rc.ancillae);
    rc.canonical["thetas"] = rc.thetas;
    rc.canonical["policy"] = policy_json;
    rc.canonical["trials"] = c.trials;
    rc.canonical["estimator"] = est;
    rc.canonical["seed"] = c.seed;
    rc.canonical["stratified"] = c.stratified;
    if (!rc.sweep_alphas.empty()) {
        rc.canonical["sweep"] = {{"alphas", rc.sweep_alphas}};
    }
    // Constructing the receiver runs the remaining cross-field checks.
    Receiver check(c);
    return rc;
}

void override_seed(RunConfig &config, std::uint64_t seed) {
    config.receiver.seed = seed;
    config.canonical["seed"] = seed;
}

ScanConfig parse_scan_config(const Json &doc) {
    Fields f(doc, "");
    ScanConfig sc;
    ScanGrid &g = sc.grid;
    SignalSpec signal = parse_signal(f);
    g = ScanGrid::defaults(signal);
    g.cutoff = parse_cutoff(f);
    g.leak_tol = parse_leak_tol(f);
    g.ancillae = parse_ancillae(f.get("ancillae"), g.cutoff, g.ancillae);
    if (const Json *s = f.get("scan")) {
        Fields sf(*s, "scan");
        g.theta = sf.numbers("theta", g.theta);
        g.phi = sf.numbers("phi", g.phi);
        g.chi = sf.numbers("chi", g.chi);
        g.phi0 = sf.numbers("phi0", g.phi0);
        g.phi1 = sf.numbers("phi1", g.phi1);
        long long budget = sf.integer("budget", static_cast<long long>(g.budget));
        if (budget < 1) {
            throw ConfigError("scan.budget", "must be >= 1");
        }
        g.budget = static_cast<std::size_t>(budget);
        g.y_grid = QuadratureGrid(-10.0, 10.0, parse_points(sf, "y_points", g.y_grid.points()));
        g.boundary_grid = QuadratureGrid(-10.0, 10.0, parse_points(sf, "boundary_points", g.boundary_grid.points()));
        std::string sort_by = sf.text("sort_by", std::string(scan_decision_name(sc.sort_by)));
        if (sort_by == scan_decision_name(ScanDecision::kFixedThreshold)) {
            sc.sort_by = ScanDecision::kFixedThreshold;
        } else if (sort_by == scan_decision_name(ScanDecision::kMaximumLikelihood)) {
            sc.sort_by = ScanDecision::kMaximumLikelihood;
        } else {
            throw ConfigError("scan.sort_by", "must be \"fixed-threshold\" or \"2d-maximum-likelihood\"");
        }
        sf.finish();
    }
    f.finish();
    g.validate();

    sc.canonical = signal_json(g.signal);
    sc.canonical["cutoff"] = g.cutoff;
    sc.canonical["leak_tol"] = g.leak_tol;
    sc.canonical["ancillae"] = ancillae_json(g.ancillae);
    sc.canonical["scan"] = {{"theta", g.theta},
                            {"phi", g.phi},
                            {"chi", g.chi},
                            {"phi0", g.phi0},
                            {"phi1", g.phi1},
                            {"budget", g.budget},
                            {"y_points", g.y_grid.points()},
                            {"boundary_points", g.boundary_grid.points()},
                            {"sort_by", scan_decision_name(sc.sort_by)}};
    return sc;
}

std::string config_digest(const Json &canonical) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

Json report_to_json(const BerReport &r, std::size_t steps, const std::string &digest) {
    Json j;
    j["kind"] = "ber-report";
    j["estimate"] = r.estimate;
    j["std_error"] = r.std_error;
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    j["ber0_reference"] = r.ber0_reference;
    j["trials"] = r.trials;
    j["max_leakage"] = r.max_leakage;
    j["seed"] = r.seed;
    j["config_digest"] = digest;
    j["estimator"] = estimator_name(r.estimator);
    j["stratified"] = r.stratified;
    j["steps"] = steps;
    return j;
}

Json exact_to_json(const ExactBer &ber, const RunConfig &config, const std::string &digest) {
    Json j;
    j["kind"] = "exact-n1";
    j["alpha"] = config.receiver.signal.alpha;
    j["ancilla"] = ancilla_to_json(config.ancillae.front());
    j["theta"] = config.thetas.front();
    j["ber"] = ber.ber;
    j["ber0"] = ber.ber0;
    j["difference"] = ber.difference;
    j["config_digest"] = digest;
    return j;
}

Json scan_to_json(const ScanReport &report, const ScanConfig &config, const std::string &digest) {
    Json j;
    j["kind"] = "u2-scan";
    j["dropped_parameters"] = {
        {{"name", "delta"},
         {"reason", "exp(i delta (m + n)) equals shifting both detection phases phi0 and phi1 by delta"}}};
    j["decision_rules"] = {
        {"fixed-threshold", "decide + iff x cos(theta) - y sin(theta) >= x_th"},
        {"2d-maximum-likelihood", "decide + iff p(+) P(x, y | +alpha) >= p(-) P(x, y | -alpha)"}};
    j["sorted_by"] = scan_decision_name(report.sorted_by);
    j["ber0"] = report.ber0;
    j["flag_margin"] = kScanFlagMargin;
    j["config"] = config.canonical;
    j["config_digest"] = digest;
    Json rows = Json::array();
    for (const auto &r : report.rows) {
        rows.push_back({{"index", r.index},
                        {"ancilla", r.ancilla},
                        {"delta", r.u.delta},
                        {"theta", r.u.theta},
                        {"phi", r.u.phi},
                        {"chi", r.u.chi},
                        {"phi0", r.u.phi0},
                        {"phi1", r.u.phi1},
                        {"ber_fixed", r.ber_fixed},
                        {"ber_ml", r.ber_ml},
                        {"diff_fixed", r.ber_fixed - report.ber0},
                        {"diff_ml", r.ber_ml - report.ber0},
                        {"flagged", r.flagged}});
    }
    j["rows"] = std::move(rows);
    return j;
}

}  // namespace ahr
