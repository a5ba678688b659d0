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

#ifndef AHR_COMMANDS_H
#define AHR_COMMANDS_H

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

namespace ahr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalGuard = 3;

/// Environment variable naming the default output directory.
inline constexpr const char *kOutputDirEnv = "AHR_OUTPUT_DIR";

struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    std::optional<std::filesystem::path> dump_trajectories;
    std::optional<std::filesystem::path> out;
};

struct VerifyOptions {
    std::string suite = "all";
    std::uint64_t seed = 1;
    int cutoff = 40;
    double alpha = 0.5;
    int workers = 1;
    std::optional<std::filesystem::path> out;
};

struct PlotOptions {
    std::string kind;
    std::filesystem::path source;
    int bins = 40;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    std::optional<std::filesystem::path> out;
};

// Each command writes its result file, prints a short summary to `out`, and
// returns an exit code. Errors propagate as exceptions; see run_guarded.
int cmd_simulate(const CommandOptions &opts, std::ostream &out);
int cmd_verify(const VerifyOptions &opts, std::ostream &out);
int cmd_exact_n1(const CommandOptions &opts, std::ostream &out);
int cmd_scan_u2(const CommandOptions &opts, std::ostream &out);
int cmd_plotdata(const PlotOptions &opts, std::ostream &out);

/// Runs `body`, mapping ConfigError to 2 and cutoff/grid/density guards to 3,
/// with the diagnostic written to `err`.
int run_guarded(const std::function<int()> &body, std::ostream &err);

/// `--out` if given, otherwise `default_name` under $AHR_OUTPUT_DIR (or the
/// working directory).
std::filesystem::path output_path(const std::optional<std::filesystem::path> &out, const std::string &default_name);

}  // namespace ahr

#endif  // AHR_COMMANDS_H
