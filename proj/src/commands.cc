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

#include "ahr/commands.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "ahr/analysis.h"
#include "ahr/config.h"
#include "ahr/errors.h"
#include "ahr/homodyne.h"
#include "ahr/stats.h"

namespace ahr {
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + path.string());
    }
    f << text;
}

void write_json(const fs::path &path, const Json &j) {
    write_text(path, j.dump(2) + "\n");
}

std::string sign_label(Sign s) {
    return s == Sign::kPlus ? "+" : "-";
}

std::string dump_trajectories(const std::vector<Trajectory> &trajectories, const SignalSpec &signal,
                              std::size_t steps, bool stratified) {
    std::ostringstream os;
    os << "trial,truth,s";
    for (std::size_t n = 1; n <= steps; ++n) {
        os << ",y_" << n;
    }
    for (std::size_t n = 1; n <= steps; ++n) {
        os << ",theta_" << n;
    }
    for (std::size_t n = 1; n <= steps; ++n) {
        os << ",ancilla_" << n;
    }
    os << ",x,x0,conditional_error,decision\n";
    for (std::size_t k = 0; k < trajectories.size(); ++k) {
        const auto &t = trajectories[k];
        os << (stratified ? k / 2 : k) << ',' << sign_label(t.truth) << ',' << format_double(signal.amplitude(t.truth));
        for (double y : t.outcomes) {
            os << ',' << format_double(y);
        }
        for (double th : t.thetas) {
            os << ',' << format_double(th);
        }
        for (std::size_t a : t.ancillae) {
            os << ',' << a;
        }
        os << ',' << (t.final_x ? format_double(*t.final_x) : "");
        os << ',' << (t.x0 ? format_double(*t.x0) : "");
        os << ',' << (t.conditional_error ? format_double(*t.conditional_error) : "");
        os << ',' << (t.decision ? sign_label(*t.decision) : "") << '\n';
    }
    return os.str();
}

// --- verify -----------------------------------------------------------------

struct Check {
    std::string name;
    double value;
    double bound;
    bool passed;
};

class CheckList {
   public:
    explicit CheckList(std::string suite) : suite_(std::move(suite)) {
    }
    // Passes when value < bound.
    void below(const std::string &name, double value, double bound) {
        checks_.push_back({suite_ + "." + name, value, bound, value < bound});
    }
    // Passes when value > bound.
    void above(const std::string &name, double value, double bound) {
        checks_.push_back({suite_ + "." + name, value, bound, value > bound});
    }
    std::vector<Check> take() {
        return std::move(checks_);
    }

   private:
    std::string suite_;
    std::vector<Check> checks_;
};

double fidelity_gap(const TwoModeState &a, const TwoModeState &b) {
    return std::abs(1.0 - std::norm(inner_product(a, b)) / (a.norm_squared() * b.norm_squared()));
}

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

std::vector<Check> verify_fock(const VerifyOptions &o) {
    CheckList c("fock");
    const int d = o.cutoff;
    auto sig = coherent_state(o.alpha, d);
    auto cat = cat_state(1.0, Parity::kOdd, d);
    auto in = tensor(sig, cat);
    RandomStream rng = RandomStream::substream(o.seed, 0, 10);
    double norm_err = 0, number_err = 0, inverse_err = 0, image_err = 0, u2_number_err = 0;
    for (int k = 0; k < 4; ++k) {
        double theta = rng.uniform() * std::numbers::pi / 2;
        auto out = beam_splitter(in, BeamSplitterAngle{theta});
        norm_err = std::max(norm_err, std::abs(out.norm_squared() - in.norm_squared()));
        number_err =
            std::max(number_err, max_abs_diff(in.total_photon_distribution(), out.total_photon_distribution()));
        auto back = beam_splitter(out, BeamSplitterAngle{-theta});
        inverse_err = std::max(inverse_err, fidelity_gap(in, back));

        cplx gamma = std::polar(0.4, 2 * std::numbers::pi * rng.uniform());
        double cth = std::cos(theta), sth = std::sin(theta);
        auto pair = beam_splitter(tensor(sig, coherent_state(gamma, d)), BeamSplitterAngle{theta});
        auto image = tensor(coherent_state(cth * o.alpha + sth * gamma, d),
                            coherent_state(-sth * o.alpha + cth * gamma, d));
        image_err = std::max(image_err, fidelity_gap(pair, image));

        U2Params u{2 * std::numbers::pi * rng.uniform(), 2 * std::numbers::pi * rng.uniform(), theta,
                   2 * std::numbers::pi * rng.uniform(), 0, 0};
        auto general = beam_splitter_u2(in, u);
        u2_number_err = std::max(
            u2_number_err, max_abs_diff(in.total_photon_distribution(), general.total_photon_distribution()));
    }
    c.below("norm_preservation", norm_err, 1e-12);
    c.below("photon_number_conservation", number_err, 1e-12);
    c.below("inverse_angle", inverse_err, 1e-12);
    c.below("coherent_image", image_err, 1e-10);
    c.below("u2_photon_number_conservation", u2_number_err, 1e-12);
    return c.take();
}

std::vector<Check> verify_homodyne(const VerifyOptions &o) {
    CheckList c("homodyne");
    const int d = o.cutoff;
    auto grid = QuadratureGrid::standard();
    HermiteTable table(grid, d);
    auto sig = coherent_state(o.alpha, d);
    auto density = outcome_pdf(quad_amplitude(sig, {}, table));
    c.below("coherent_normalization", std::abs(density.trapezoid_integral() - 1.0), 1e-9);
    double mean = std::numbers::sqrt2 * o.alpha;
    double worst = 0;
    for (int i = 0; i < grid.points(); ++i) {
        worst = std::max(worst, std::abs(density.values[i] - gaussian_quadrature_density(grid.node(i), mean)));
    }
    c.below("coherent_gaussian_profile", worst, 1e-10);
    auto cat = cat_state(1.0, Parity::kOdd, d);
    c.below("cat_normalization", std::abs(outcome_pdf(quad_amplitude(cat, {}, table)).trapezoid_integral() - 1.0),
            1e-9);
    double split = 0;
    for (double x : {-1.3, 0.0, 0.4, 2.2}) {
        split = std::max(split, std::abs(mass_below(cat, {}, x) + mass_above(cat, {}, x) - cat.norm_squared()));
    }
    c.below("tail_mass_complement", split, 1e-12);

    QuadratureSampler sampler(grid, d);
    RandomStream rng = RandomStream::substream(o.seed, 0, 11);
    constexpr std::size_t kSamples = 20000;
    std::vector<double> xs(kSamples);
    for (auto &x : xs) {
        x = sampler.sample(sig, {}, rng).value;
    }
    c.below("sampler_ks", stats::ks_normal(xs, mean, 0.5) * std::sqrt(static_cast<double>(kSamples)),
            stats::kKsCritical1pct);

    auto pair = beam_splitter(tensor(sig, cat), BeamSplitterAngle{std::numbers::pi / 4});
    auto post = collapse(pair, Port::kAncilla, {}, 0.37);
    c.below("collapse_normalization", std::abs(post.norm_squared() - 1.0), 1e-12);
    return c.take();
}

std::vector<Check> verify_separability(const VerifyOptions &o) {
    CheckList c("separability");
    const int d = o.cutoff;
    const std::pair<ModeState, ModeState> probes[] = {
        {coherent_state(o.alpha, d), coherent_state(cplx(0, 0.3), d)},
        {coherent_state(o.alpha, d), cat_state(1.0, Parity::kOdd, d)},
        {fock_state(1, d), squeezed_vacuum(0.5, d)},
        {cat_state(1.0, Parity::kEven, d), fock_state(2, d)},
    };
    double worst = 0;
    for (const auto &[a, b] : probes) {
        for (double theta : {std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3}) {
            worst = std::max(worst, separability_check(theta, a, b));
        }
    }
    c.below("quadrature_product_density", worst, 1e-6);
    double amp_err = 0;
    int min_rank = 2, max_rank = 2;
    for (double theta : {std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3}) {
        auto e = entanglement_check(theta);
        amp_err = std::max({amp_err, std::abs(e.stay - std::cos(theta)), std::abs(e.hop + std::sin(theta))});
        min_rank = std::min(min_rank, e.schmidt_rank);
        max_rank = std::max(max_rank, e.schmidt_rank);
    }
    // B|1,0> = cos|1,0> - sin|0,1> for B = exp[theta (a0^dag a1 - a1^dag a0)].
    c.below("single_photon_amplitudes", amp_err, 1e-12);
    c.below("single_photon_schmidt_rank", std::abs(min_rank - 2) + std::abs(max_rank - 2), 0.5);
    return c.take();
}

std::vector<Check> verify_factorization(const VerifyOptions &o) {
    CheckList c("factorization");
    ReceiverConfig rc;
    rc.signal.alpha = o.alpha;
    rc.cutoff = o.cutoff;
    rc.policy = std::make_shared<ConstantPolicy>(AncillaSpec::cat(1.0, Parity::kOdd), std::numbers::pi / 4, 1);
    rc.trials = 20000;
    rc.estimator = Estimator::kMonteCarlo;
    rc.seed = o.seed;
    rc.workers = o.workers;
    std::vector<Trajectory> ts;
    Receiver(rc).estimate_ber(&ts);
    auto r = factorization_test(ts, rc.signal);
    double sqrt_m = std::sqrt(static_cast<double>(r.samples));
    c.below("ks_x0", r.ks_statistic * sqrt_m, stats::kKsCritical1pct);
    c.below("correlation_x0_v1", std::abs(r.correlations.front()), r.correlation_bound);
    c.above("chi_square_independence_p", r.chi2_p_value, 0.01);
    return c.take();
}

// --- plotdata ---------------------------------------------------------------

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::string plot_x0_histogram(const PlotOptions &o) {
    std::ifstream in(o.source);
    if (!in) {
        throw ConfigError("source", "cannot read " + o.source.string());
    }
    std::string header;
    std::getline(in, header);
    auto cols = split_csv(header);
    auto col = [&](const std::string &name) {
        auto it = std::find(cols.begin(), cols.end(), name);
        if (it == cols.end()) {
            throw ConfigError("source", "x0-histogram needs a trajectory dump with column '" + name + "'");
        }
        return static_cast<std::size_t>(it - cols.begin());
    };
    std::size_t ix0 = col("x0"), is = col("s");
    std::vector<double> x0;
    std::map<double, std::size_t> amplitude_counts;
    std::string line;
    while (std::getline(in, line)) {
        auto cells = split_csv(line);
        if (cells.size() != cols.size()) {
            throw ConfigError("source", "malformed trajectory row");
        }
        if (cells[ix0].empty()) {
            throw ConfigError("source", "dump has no x0 values; simulate with the mc estimator");
        }
        x0.push_back(std::stod(cells[ix0]));
        ++amplitude_counts[std::stod(cells[is])];
    }
    if (x0.empty()) {
        throw ConfigError("source", "trajectory dump is empty");
    }
    if (o.bins < 1) {
        throw ConfigError("bins", "must be >= 1");
    }
    auto [lo_it, hi_it] = std::minmax_element(x0.begin(), x0.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi == lo) {
        hi = lo + 1;
    }
    double width = (hi - lo) / o.bins;
    std::vector<std::size_t> counts(o.bins);
    for (double v : x0) {
        auto b = static_cast<std::size_t>(std::min<double>(o.bins - 1, std::floor((v - lo) / width)));
        ++counts[b];
    }
    std::ostringstream os;
    os << "bin_center,count,reference_density\n";
    for (int b = 0; b < o.bins; ++b) {
        double center = lo + (b + 0.5) * width;
        double ref = 0;
        for (const auto &[s, n] : amplitude_counts) {
            ref += static_cast<double>(n) / x0.size() * gaussian_quadrature_density(center, std::numbers::sqrt2 * s);
        }
        os << format_double(center) << ',' << counts[b] << ',' << format_double(ref) << '\n';
    }
    return os.str();
}

std::string plot_ber_vs_alpha(const PlotOptions &o) {
    Json doc = read_json_file(o.source);
    if (doc.is_object() && doc.contains("kind")) {
        throw ConfigError("source", "ber-vs-alpha needs a receiver config, got a '" +
                                        doc["kind"].get<std::string>() + "' report");
    }
    RunConfig rc = parse_run_config(doc);
    if (rc.sweep_alphas.empty()) {
        throw ConfigError("sweep.alphas", "ber-vs-alpha needs a configured amplitude list");
    }
    if (o.seed) {
        override_seed(rc, *o.seed);
    }
    std::ostringstream os;
    os << "alpha,ber,ber0,std_error\n";
    for (double a : rc.sweep_alphas) {
        ReceiverConfig c = rc.receiver;
        c.signal.alpha = a;
        c.workers = o.workers;
        auto r = Receiver(c).estimate_ber();
        os << format_double(a) << ',' << format_double(r.estimate) << ',' << format_double(r.ber0_reference) << ','
           << format_double(r.std_error) << '\n';
    }
    return os.str();
}

std::string plot_scan_heatmap(const PlotOptions &o) {
    Json doc = read_json_file(o.source);
    if (!doc.is_object() || doc.value("kind", "") != "u2-scan") {
        throw ConfigError("source", "scan-heatmap needs a u2-scan report");
    }
    bool ml = doc.at("sorted_by").get<std::string>() == scan_decision_name(ScanDecision::kMaximumLikelihood);
    // Minimum over the remaining parameters for each (ancilla, theta, chi) cell.
    std::map<std::tuple<std::size_t, double, double>, double> cells;
    for (const auto &row : doc.at("rows")) {
        auto key = std::make_tuple(row.at("ancilla").get<std::size_t>(), row.at("theta").get<double>(),
                                   row.at("chi").get<double>());
        double ber = row.at(ml ? "ber_ml" : "ber_fixed").get<double>();
        auto [it, inserted] = cells.emplace(key, ber);
        if (!inserted) {
            it->second = std::min(it->second, ber);
        }
    }
    std::ostringstream os;
    os << "ancilla,theta,chi,ber\n";
    for (const auto &[key, ber] : cells) {
        os << std::get<0>(key) << ',' << format_double(std::get<1>(key)) << ',' << format_double(std::get<2>(key))
           << ',' << format_double(ber) << '\n';
    }
    return os.str();
}

}  // namespace

fs::path output_path(const std::optional<fs::path> &out, const std::string &default_name) {
    if (out) {
        return *out;
    }
    const char *dir = std::getenv(kOutputDirEnv);
    return (dir && *dir ? fs::path(dir) : fs::path(".")) / default_name;
}

int cmd_simulate(const CommandOptions &opts, std::ostream &out) {
    RunConfig rc = parse_run_config(read_json_file(opts.config));
    if (opts.seed) {
        override_seed(rc, *opts.seed);
    }
    rc.receiver.workers = opts.workers;
    Receiver receiver(rc.receiver);
    std::vector<Trajectory> ts;
    auto report = receiver.estimate_ber(opts.dump_trajectories ? &ts : nullptr);
    auto digest = config_digest(rc.canonical);
    auto path = output_path(opts.out, "ber_report.json");
    write_json(path, report_to_json(report, receiver.steps(), digest));
    if (opts.dump_trajectories) {
        write_text(*opts.dump_trajectories,
                   dump_trajectories(ts, rc.receiver.signal, receiver.steps(), rc.receiver.stratified));
    }
    out << "estimate " << format_double(report.estimate) << " +/- " << format_double(report.std_error) << " (ber0 "
        << format_double(report.ber0_reference) << ") -> " << path.string() << '\n';
    return kExitOk;
}

int cmd_verify(const VerifyOptions &opts, std::ostream &out) {
    static const std::vector<std::string> kSuites = {"fock", "homodyne", "separability", "factorization"};
    if (opts.suite != "all" && std::find(kSuites.begin(), kSuites.end(), opts.suite) == kSuites.end()) {
        throw ConfigError("suite", "unknown suite \"" + opts.suite + "\"");
    }
    if (opts.cutoff < 2) {
        throw ConfigError("cutoff", "must be >= 2");
    }
    if (!(opts.alpha > 0) || !std::isfinite(opts.alpha)) {
        throw ConfigError("alpha", "must be a finite real > 0");
    }
    std::vector<Check> checks;
    for (const auto &suite : kSuites) {
        if (opts.suite != "all" && opts.suite != suite) {
            continue;
        }
        std::vector<Check> part = suite == "fock"           ? verify_fock(opts)
                                  : suite == "homodyne"     ? verify_homodyne(opts)
                                  : suite == "separability" ? verify_separability(opts)
                                                            : verify_factorization(opts);
        checks.insert(checks.end(), part.begin(), part.end());
    }
    bool ok = std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
    Json j;
    j["kind"] = "verify";
    j["suite"] = opts.suite;
    j["seed"] = opts.seed;
    j["cutoff"] = opts.cutoff;
    j["alpha"] = opts.alpha;
    j["passed"] = ok;
    j["checks"] = Json::array();
    for (const auto &c : checks) {
        j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"passed", c.passed}});
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
            << " bound=" << format_double(c.bound) << '\n';
    }
    write_json(output_path(opts.out, "verify.json"), j);
    return ok ? kExitOk : kExitPropertyFailure;
}

int cmd_exact_n1(const CommandOptions &opts, std::ostream &out) {
    RunConfig rc = parse_run_config(read_json_file(opts.config));
    if (rc.policy_kind != "constant" || rc.thetas.size() != 1) {
        throw ConfigError("thetas", "exact-n1 needs exactly one angle under the constant policy (N = 1), got N = " +
                                        std::to_string(rc.receiver.policy ? rc.receiver.policy->steps() : 0));
    }
    ExactN1Config ec;
    ec.signal = rc.receiver.signal;
    ec.ancilla = rc.ancillae.front();
    ec.theta = rc.thetas.front();
    ec.cutoff = rc.receiver.cutoff;
    ec.leak_tol = rc.receiver.leak_tol;
    ec.grid = rc.receiver.grid;
    auto ber = exact_ber_n1(ec);
    auto path = output_path(opts.out, "exact_n1.json");
    write_json(path, exact_to_json(ber, rc, config_digest(rc.canonical)));
    out << "ber " << format_double(ber.ber) << " ber0 " << format_double(ber.ber0) << " difference "
        << format_double(ber.difference) << " -> " << path.string() << '\n';
    return kExitOk;
}

int cmd_scan_u2(const CommandOptions &opts, std::ostream &out) {
    ScanConfig sc = parse_scan_config(read_json_file(opts.config));
    auto report = scan_ber(sc.grid, sc.sort_by, opts.workers);
    auto path = output_path(opts.out, "u2_scan.json");
    write_json(path, scan_to_json(report, sc, config_digest(sc.canonical)));
    auto flagged = std::count_if(report.rows.begin(), report.rows.end(), [](const ScanRow &r) { return r.flagged; });
    out << report.rows.size() << " points, " << flagged << " flagged -> " << path.string() << '\n';
    return kExitOk;
}

int cmd_plotdata(const PlotOptions &opts, std::ostream &out) {
    std::string table;
    if (opts.kind == "x0-histogram") {
        table = plot_x0_histogram(opts);
    } else if (opts.kind == "ber-vs-alpha") {
        table = plot_ber_vs_alpha(opts);
    } else if (opts.kind == "scan-heatmap") {
        table = plot_scan_heatmap(opts);
    } else {
        throw ConfigError("kind", "unknown plot kind \"" + opts.kind + "\"");
    }
    auto path = output_path(opts.out, opts.kind + ".csv");
    write_text(path, table);
    out << opts.kind << " -> " << path.string() << '\n';
    return kExitOk;
}

int run_guarded(const std::function<int()> &body, std::ostream &err) {
    try {
        return body();
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Json::exception &e) {
        err << "config error: source: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const CutoffError &e) {
        err << "numerical guard (leakage): " << e.what() << '\n';
        return kExitNumericalGuard;
    } catch (const GridError &e) {
        err << "numerical guard (grid): " << e.what() << '\n';
        return kExitNumericalGuard;
    } catch (const ZeroDensityError &e) {
        err << "numerical guard (density): " << e.what() << '\n';
        return kExitNumericalGuard;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitPropertyFailure;
    }
}

}  // namespace ahr
