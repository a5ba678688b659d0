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

#include <CLI11.hpp>
#include <iostream>

#include "ahr/commands.h"

namespace {

void add_common(CLI::App *cmd, ahr::CommandOptions &o) {
    cmd->add_option("--config", o.config, "JSON configuration file")->required();
    cmd->add_option("--seed", o.seed, "override the config seed");
    cmd->add_option("--workers", o.workers, "worker threads (output does not depend on it)")
        ->check(CLI::Range(1, 1024));
    cmd->add_option("--out", o.out, "result file (default: $AHR_OUTPUT_DIR or cwd)");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Homodyne receiver with ancilla feedforward: simulation and exact checks"};
    app.require_subcommand(1);

    ahr::CommandOptions sim;
    auto *simulate = app.add_subcommand("simulate", "estimate the bit error rate of a receiver config");
    add_common(simulate, sim);
    simulate->add_option("--dump-trajectories", sim.dump_trajectories, "write one CSV row per trial");

    ahr::VerifyOptions ver;
    auto *verify = app.add_subcommand("verify", "run invariant suites with fixed seeds");
    verify->add_option("suite", ver.suite, "fock | homodyne | separability | factorization | all");
    verify->add_option("--seed", ver.seed, "base seed");
    verify->add_option("--cutoff", ver.cutoff, "Fock cutoff");
    verify->add_option("--alpha", ver.alpha, "signal amplitude");
    verify->add_option("--workers", ver.workers, "worker threads")->check(CLI::Range(1, 1024));
    verify->add_option("--out", ver.out, "summary file");

    ahr::CommandOptions exact;
    auto *exact_n1 = app.add_subcommand("exact-n1", "deterministic BER for a single ancilla");
    add_common(exact_n1, exact);

    ahr::CommandOptions scan;
    auto *scan_u2 = app.add_subcommand("scan-u2", "BER over general two-mode unitaries and detection phases");
    add_common(scan_u2, scan);

    ahr::PlotOptions plot;
    auto *plotdata = app.add_subcommand("plotdata", "export CSV tables for plotting");
    plotdata->add_option("kind", plot.kind, "x0-histogram | ber-vs-alpha | scan-heatmap")->required();
    plotdata->add_option("source", plot.source, "trajectory dump, receiver config or scan report")->required();
    plotdata->add_option("--bins", plot.bins, "histogram bins");
    plotdata->add_option("--seed", plot.seed, "override the config seed");
    plotdata->add_option("--workers", plot.workers, "worker threads")->check(CLI::Range(1, 1024));
    plotdata->add_option("--out", plot.out, "output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return ahr::kExitConfigError;
    }

    return ahr::run_guarded(
        [&] {
            if (*simulate) return ahr::cmd_simulate(sim, std::cout);
            if (*verify) return ahr::cmd_verify(ver, std::cout);
            if (*exact_n1) return ahr::cmd_exact_n1(exact, std::cout);
            if (*scan_u2) return ahr::cmd_scan_u2(scan, std::cout);
            return ahr::cmd_plotdata(plot, std::cout);
        },
        std::cerr);
}
