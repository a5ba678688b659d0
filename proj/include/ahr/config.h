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

#ifndef AHR_CONFIG_H
#define AHR_CONFIG_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ahr/analysis.h"
#include "ahr/receiver.h"
#include "ahr/u2_explorer.h"

namespace ahr {

using Json = nlohmann::json;

/// Parsed receiver configuration plus its canonical form.
struct RunConfig {
    ReceiverConfig receiver;
    std::vector<AncillaSpec> ancillae;
    std::vector<double> thetas;
    std::string policy_kind = "constant";
    /// Amplitudes swept by the ber-vs-alpha export; empty unless configured.
    std::vector<double> sweep_alphas;
    Json canonical;
};

struct ScanConfig {
    ScanGrid grid;
    ScanDecision sort_by = ScanDecision::kFixedThreshold;
    Json canonical;
};

/// Throws ConfigError naming the offending field (dotted path, e.g.
/// "ancillae[1].parity"). Unknown fields are rejected.
RunConfig parse_run_config(const Json &doc);
ScanConfig parse_scan_config(const Json &doc);

/// Reads and parses a JSON file; unreadable or malformed files raise
/// ConfigError with field "config".
Json read_json_file(const std::filesystem::path &path);

/// Canonical form with an overridden seed.
void override_seed(RunConfig &config, std::uint64_t seed);

/// 16 hex digits of FNV-1a over the sorted-key dump of `canonical`.
std::string config_digest(const Json &canonical);

Json ancilla_to_json(const AncillaSpec &spec);

Json report_to_json(const BerReport &report, std::size_t steps, const std::string &digest);
Json exact_to_json(const ExactBer &ber, const RunConfig &config, const std::string &digest);
Json scan_to_json(const ScanReport &report, const ScanConfig &config, const std::string &digest);

/// Fixed-precision formatting shared by every text output.
std::string format_double(double v);

}  // namespace ahr

#endif  // AHR_CONFIG_H
