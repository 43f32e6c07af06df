// Copyright 2026 The vsue-sim Authors
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
#pragma once

// JSON run configuration and JSON-lines transcript records.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "vsue/protocol.hpp"

namespace vsue::protocol {

inline constexpr const char* kConfigSchema = "vsue-config/1";
inline constexpr const char* kTranscriptSchema = "vsue-transcript/1";

/// How the code is built: hamming74 blocks, random systematic blocks, or a
/// parity-check matrix file.
struct CodeSpec {
    std::string family = "hamming74";
    std::size_t blocks = 8;
    std::size_t block_n = 7;  // random_systematic only
    std::size_t block_k = 4;
    std::uint64_t seed = 1;
    std::string path;         // matrix only, relative to the config file

    classical::LinearCode build(const std::filesystem::path& base_dir = {}) const;
};

struct SimulationConfig {
    Variant variant = Variant::pm;
    ProtocolParams params;
    CodeSpec code;
    ChannelModel channel;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::optional<std::string> out;
};

/// Every field is optional and defaults as above; delta defaults to
/// 3/sqrt(test_count/9). Unknown keys, wrong types and failed validation
/// throw ConfigError.
SimulationConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
SimulationConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const SimulationConfig& cfg);

/// Source state for the EPR variant: the configured Bell-diagonal state, or
/// solve_check_b(beta, gamma) for independent flips. ConfigError otherwise.
attack::BellDiagonalState epr_source(const ChannelModel& channel);

std::string to_string(Variant v);
std::string to_string(ChannelMode m);

/// One transcript line: the protocol's public messages plus a separate
/// "diagnostics" object that a real attacker would not see.
nlohmann::json transcript_to_json(const RunTranscript& t, std::size_t trial);

}  // namespace vsue::protocol
