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

// Acceptance runner: one PASS/FAIL line per criterion.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ahr/analysis.h"
#include "ahr/commands.h"
#include "ahr/homodyne.h"
#include "ahr/receiver.h"
#include "ahr/stats.h"
#include "ahr/u2_explorer.h"

using namespace ahr;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBer0 = 0.158655;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        pass = pass && ok;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [X]");
    }
};

std::string num(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double ber0(double alpha) {
    return 0.5 * std::erfc(std::numbers::sqrt2 * alpha);
}

const std::vector<AncillaSpec> &matrix_ancillae() {
    static const std::vector<AncillaSpec> a = {AncillaSpec::coherent(0.5), AncillaSpec::fock(1),
                                               AncillaSpec::cat(1.0, Parity::kOdd), AncillaSpec::squeezed(0.5)};
    return a;
}

constexpr double kMatrixThetas[] = {kPi / 6, kPi / 4, kPi / 3};
constexpr double kMatrixAlphas[] = {0.3, 0.5, 1.0};

Outcome homodyne_limit(double &seconds) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    ReceiverConfig c;
    c.signal.alpha = 0.5;
    auto r = estimate_ber(c, 1000, Estimator::kRaoBlackwell, 1);
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(std::abs(r.estimate - kBer0) < 1e-6, "ber=" + num(r.estimate, 10));
    o.require(seconds < 1.0, "runtime<1s");
    return o;
}

Outcome exact_matrix(double &seconds, std::vector<double> *values) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    for (const auto &anc : matrix_ancillae()) {
        for (double theta : kMatrixThetas) {
            for (double alpha : kMatrixAlphas) {
                ExactN1Config c;
                c.signal.alpha = alpha;
                c.ancilla = anc;
                c.theta = theta;
                auto r = exact_ber_n1(c);
                worst = std::max(worst, std::abs(r.difference));
                if (values) {
                    values->push_back(r.ber);
                }
            }
        }
    }
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(worst < 1e-4, "36 configs max|ber-ber0|=" + num(worst));
    o.require(seconds < 60.0, "runtime<60s");
    return o;
}

Outcome feedforward(double &seconds, std::size_t trials, int workers) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    const auto coh = AncillaSpec::coherent(0.5);
    const auto cat = AncillaSpec::cat(1.0, Parity::kOdd);
    const auto fock = AncillaSpec::fock(1);
    struct Run {
        std::string name;
        std::shared_ptr<const FeedforwardPolicy> policy;
        std::uint64_t seed;
    };
    const std::vector<Run> runs = {
        {"hash-random N=2", std::make_shared<HashRandomPolicy>(std::vector{coh, cat, fock}, 2, 17), 101},
        {"hash-random N=3", std::make_shared<HashRandomPolicy>(std::vector{coh, cat, fock}, 3, 29), 102},
        {"threshold-switch N=2", std::make_shared<ThresholdSwitchPolicy>(std::vector{cat, fock}, 2, kPi / 4, 0.3),
         103},
        {"threshold-switch N=3", std::make_shared<ThresholdSwitchPolicy>(std::vector{coh, cat}, 3, kPi / 4, 0.3),
         104},
    };
    for (const auto &run : runs) {
        ReceiverConfig c;
        c.signal.alpha = 0.5;
        c.policy = run.policy;
        c.trials = trials;
        c.estimator = Estimator::kRaoBlackwell;
        c.seed = run.seed;
        c.workers = workers;
        auto r = Receiver(c).estimate_ber();
        bool ok = std::abs(r.estimate - kBer0) < 3 * r.std_error && r.std_error < 2e-3;
        o.require(ok, run.name + " " + num(r.estimate, 6) + "+-" + num(r.std_error, 2));
    }
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(seconds < 600.0, "runtime<10min");
    return o;
}

Outcome factorization(double &seconds, std::size_t trials, int workers) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    ReceiverConfig c;
    c.signal.alpha = 0.5;
    c.policy = std::make_shared<ConstantPolicy>(AncillaSpec::cat(1.0, Parity::kOdd), kPi / 4, 1);
    c.trials = trials;
    c.estimator = Estimator::kMonteCarlo;
    c.seed = 4;
    c.workers = workers;
    std::vector<Trajectory> ts;
    Receiver(c).estimate_ber(&ts);
    auto r = factorization_test(ts, c.signal);
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(r.ks_pass, "KS p=" + num(r.ks_p_value));
    o.require(r.correlation_pass, "|corr|=" + num(std::abs(r.correlations.front())) + "<" + num(r.correlation_bound));
    o.require(r.chi2_pass, "chi2 p=" + num(r.chi2_p_value));
    return o;
}

Outcome separability(double &seconds) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    const std::pair<ModeState, ModeState> probes[] = {
        {coherent_state(0.5), coherent_state(cplx(0, 0.3))},
        {coherent_state(0.5), cat_state(1.0, Parity::kOdd)},
        {fock_state(1), squeezed_vacuum(0.5)},
        {cat_state(1.0, Parity::kEven), fock_state(2)},
    };
    double worst = 0;
    for (const auto &[a, b] : probes) {
        for (double theta : kMatrixThetas) {
            worst = std::max(worst, separability_check(theta, a, b));
        }
    }
    o.require(worst < 1e-6, "quadrature map max dev=" + num(worst));
    double literal = 0, signed_dev = 0;
    bool rank_ok = true;
    for (double theta : kMatrixThetas) {
        auto e = entanglement_check(theta);
        literal = std::max({literal, std::abs(e.stay - std::cos(theta)), std::abs(e.hop - std::sin(theta))});
        signed_dev = std::max({signed_dev, std::abs(e.stay - std::cos(theta)), std::abs(e.hop + std::sin(theta))});
        rank_ok = rank_ok && e.schmidt_rank == 2;
    }
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(literal < 1e-12, "amplitudes vs (cos,sin) dev=" + num(literal));
    o.detail += "; vs (cos,-sin) dev=" + num(signed_dev);
    o.require(rank_ok, "schmidt rank 2");
    return o;
}

Outcome threshold_balance(double &seconds) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    SignalSpec s{0.5, 0.7, 0.3};
    double x = threshold(s).x_th;
    double mu = std::numbers::sqrt2 * s.alpha;
    double lhs = s.prior_plus * gaussian_quadrature_density(x, mu);
    double rhs = s.prior_minus * gaussian_quadrature_density(x, -mu);
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(std::abs(x + 0.2996) < 1e-4, "x_th=" + num(x, 8));
    o.require(std::abs(lhs - rhs) < 1e-12, "balance=" + num(std::abs(lhs - rhs)));
    return o;
}

Outcome u2_reduction(double &seconds, const std::vector<double> &exact, int workers) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    std::size_t k = 0;
    for (const auto &anc : matrix_ancillae()) {
        for (double theta : kMatrixThetas) {
            for (double alpha : kMatrixAlphas) {
                ScanGrid g;
                g.signal.alpha = alpha;
                g.ancillae = {anc};
                g.theta = {theta};
                g.phi = g.chi = g.phi0 = g.phi1 = {0.0};
                auto rep = scan_ber(g, ScanDecision::kFixedThreshold, workers);
                worst = std::max(worst, std::abs(rep.rows.front().ber_fixed - exact.at(k++)));
            }
        }
    }
    o.require(worst < 1e-6, "zero-phase rows vs exact max dev=" + num(worst));

    double mismatch = 0;
    for (double alpha : kMatrixAlphas) {
        auto g = ScanGrid::defaults(SignalSpec{alpha, 0.5, 0.5});
        g.theta = {0.0};
        auto rep = scan_ber(g, ScanDecision::kFixedThreshold, workers);
        for (const auto &row : rep.rows) {
            double expect = 0.5 * std::erfc(std::numbers::sqrt2 * alpha * std::cos(row.u.phi0 + row.u.phi + row.u.chi));
            mismatch = std::max(mismatch, std::abs(row.ber_fixed - expect));
        }
    }
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(mismatch < 1e-6, "theta=0 rows vs erfc(sqrt2 a cos phase)/2 max dev=" + num(mismatch));
    return o;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome reproducibility(double &seconds, const fs::path &dir) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(dir);
    auto put = [&](const std::string &name, const std::string &text) {
        std::ofstream(dir / name) << text;
        return dir / name;
    };
    auto run_cfg = put("ff.json", R"({"alpha": 0.5,
        "ancillae": [{"kind": "coherent", "amplitude": 0.5}, {"kind": "cat", "amplitude": 1.0, "parity": "odd"},
                     {"kind": "fock", "photons": 1}],
        "policy": {"kind": "hash-random", "steps": 3, "policy_seed": 5},
        "trials": 3000, "estimator": "mc", "seed": 21, "sweep": {"alphas": [0.3, 0.5]}})");
    auto exact_cfg = put("n1.json", R"({"alpha": 0.5,
        "ancillae": [{"kind": "cat", "amplitude": 1.0, "parity": "odd"}], "thetas": [1.0471975511965976]})");
    auto scan_cfg = put("scan.json", R"({"alpha": 0.5,
        "scan": {"theta": [0.3, 0.9], "phi": [0, 1], "chi": [0.5], "phi0": [0, 2], "phi1": [1]}})");

    // Each command produces one file and a stdout transcript per worker count.
    using Body = std::function<int(int workers, const std::string &tag, std::ostream &out)>;
    const std::vector<std::pair<std::string, Body>> commands = {
        {"simulate",
         [&](int w, const std::string &tag, std::ostream &out) {
             CommandOptions c{run_cfg, std::nullopt, w, dir / ("dump" + tag + ".csv"), dir / ("sim" + tag + ".json")};
             return cmd_simulate(c, out);
         }},
        {"verify",
         [&](int w, const std::string &tag, std::ostream &out) {
             VerifyOptions v;
             v.suite = "homodyne";
             v.seed = 3;
             v.workers = w;
             v.out = dir / ("verify" + tag + ".json");
             return cmd_verify(v, out);
         }},
        {"exact-n1",
         [&](int w, const std::string &tag, std::ostream &out) {
             CommandOptions c{exact_cfg, std::nullopt, w, std::nullopt, dir / ("exact" + tag + ".json")};
             return cmd_exact_n1(c, out);
         }},
        {"scan-u2",
         [&](int w, const std::string &tag, std::ostream &out) {
             CommandOptions c{scan_cfg, std::nullopt, w, std::nullopt, dir / ("scan" + tag + ".json")};
             return cmd_scan_u2(c, out);
         }},
        {"plotdata",
         [&](int w, const std::string &tag, std::ostream &out) {
             int rc = 0;
             for (auto [kind, src] : {std::pair<std::string, fs::path>{"x0-histogram", dir / ("dump" + tag + ".csv")},
                                      {"ber-vs-alpha", run_cfg},
                                      {"scan-heatmap", dir / ("scan" + tag + ".json")}}) {
                 PlotOptions p{kind, src, 40, std::nullopt, w, dir / (kind + tag + ".csv")};
                 rc = std::max(rc, cmd_plotdata(p, out));
             }
             return rc;
         }},
    };
    std::vector<std::string> files = {"dump", "sim", "verify", "exact", "scan", "x0-histogram", "ber-vs-alpha",
                                      "scan-heatmap"};
    std::string transcript[3];
    int k = 0;
    for (const auto &[tag, workers] : {std::pair<std::string, int>{"_w1a", 1}, {"_w1b", 1}, {"_w8", 8}}) {
        std::ostringstream out;
        for (const auto &[name, body] : commands) {
            int rc = run_guarded([&] { return body(workers, tag, out); }, std::cerr);
            if (rc != kExitOk) {
                o.require(false, name + " exit " + std::to_string(rc));
            }
        }
        // output paths carry the run tag; everything else must match
        std::string text = out.str();
        for (auto pos = text.find(tag); pos != std::string::npos; pos = text.find(tag, pos)) {
            text.erase(pos, tag.size());
        }
        transcript[k++] = text;
    }
    std::size_t identical = 0;
    for (const auto &f : files) {
        auto ext = (f == "dump" || f.find('-') != std::string::npos) ? ".csv" : ".json";
        auto a = slurp(dir / (f + "_w1a" + ext));
        bool same = !a.empty() && a == slurp(dir / (f + "_w1b" + ext)) && a == slurp(dir / (f + "_w8" + ext));
        identical += same;
        if (!same) {
            o.require(false, f + " differs");
        }
    }
    o.require(identical == files.size(), std::to_string(identical) + "/" + std::to_string(files.size()) +
                                             " outputs byte-identical across reruns and --workers 1/8");
    o.require(transcript[0] == transcript[1] && transcript[0] == transcript[2], "stdout identical");
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return o;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"ahr acceptance runner"};
    std::set<int> only, expect_red;
    std::size_t trials = 100000;
    int workers = 1;
    std::string scratch = (fs::temp_directory_path() / "ahr_acceptance").string();
    app.add_option("--only", only, "criteria to run (default all)")->check(CLI::Range(1, 8));
    app.add_option("--expect-red", expect_red, "criteria known to fail; exit 0 iff exactly these fail")
        ->check(CLI::Range(1, 8));
    app.add_option("--trials", trials, "Monte-Carlo trials for criteria 3 and 4");
    app.add_option("--workers", workers, "worker threads for criteria 3, 4 and 7");
    app.add_option("--scratch", scratch, "directory for criterion 8 outputs");
    CLI11_PARSE(app, argc, argv);

    std::vector<double> exact;
    const std::vector<std::pair<std::string, std::function<Outcome(double &)>>> criteria = {
        {"homodyne limit baseline", [](double &t) { return homodyne_limit(t); }},
        {"exact N=1 invariance", [&](double &t) { return exact_matrix(t, &exact); }},
        {"feedforward invariance N=2,3", [&](double &t) { return feedforward(t, trials, workers); }},
        {"factorization", [&](double &t) { return factorization(t, trials, workers); }},
        {"separability", [](double &t) { return separability(t); }},
        {"threshold", [](double &t) { return threshold_balance(t); }},
        {"U(2) reduction",
         [&](double &t) {
             if (exact.empty()) {
                 double unused;
                 exact_matrix(unused, &exact);
             }
             return u2_reduction(t, exact, workers);
         }},
        {"reproducibility", [&](double &t) { return reproducibility(t, scratch); }},
    };

    std::set<int> red;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) {
            continue;
        }
        double seconds = 0;
        Outcome o;
        try {
            o = criteria[i].second(seconds);
        } catch (const std::exception &e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        if (!o.pass) {
            red.insert(id);
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << criteria[i].first << ": " << o.detail << " ("
                  << num(seconds, 3) << " s)" << std::endl;
    }
    std::set<int> expected;
    for (int id : expect_red) {
        if (only.empty() || only.count(id)) {
            expected.insert(id);
        }
    }
    if (red != expected) {
        std::cout << "acceptance: failing set differs from the expected-red set" << std::endl;
        return 1;
    }
    return 0;
}
