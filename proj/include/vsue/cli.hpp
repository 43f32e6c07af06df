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

// Command-line front end: simulate, verify-lemmas, rates.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vsue/checks.hpp"
#include "vsue/protocol_io.hpp"

namespace vsue::cli {

enum ExitCode : int { kSuccess = 0, kCheckFailure = 1, kUsageError = 2 };

struct VerifyConfig {
    checks::SuiteOptions suite;
    std::optional<std::string> out;
};

struct RatesConfig {
    double lo = 0.0;
    double hi = 0.2;
    double step = 0.002;
    std::string out = "rates.csv";
};

struct RunConfig {
    std::string subcommand;
    protocol::SimulationConfig simulate;
    VerifyConfig verify;
    RatesConfig rates;
    unsigned jobs = 1;
};

struct SimulationSummary {
    std::size_t trials = 0;
    std::size_t accepted = 0;
    std::size_t check_a_passed = 0;
    std::size_t decoded = 0;
    std::size_t delivered = 0;
    std::size_t mac_failures = 0;    // accepted, message tag failed
    std::size_t wrong_messages = 0;  // tag verified on a message other than m
    std::size_t payload_bits = 0;
    std::size_t payload_flips = 0;
    double expected_flip_rate = 0.0;

    double flip_rate() const;
    /// (empirical - expected) / binomial sigma; 0 when sigma vanishes and they agree.
    double flip_z() const;
};

/// Expected rate of payload bits that reach Bob flipped under the channel.
double expected_flip_rate(const protocol::ChannelModel& channel, protocol::Variant variant);

/// Parses "lo:hi:step" (inclusive). Throws ConfigError.
std::vector<double> parse_grid(const std::string& spec);

/// Runs the trials; per-trial streams derive from (seed, trial index), so the
/// result does not depend on jobs.
SimulationSummary simulate(const protocol::SimulationConfig& cfg, unsigned jobs,
                           std::vector<protocol::RunTranscript>* transcripts = nullptr);

int cmd_simulate(const protocol::SimulationConfig& cfg, unsigned jobs, std::ostream& out);
int cmd_verify_lemmas(const VerifyConfig& cfg, std::ostream& out);
int cmd_rates(const RatesConfig& cfg, std::ostream& out);

/// Full front end. Usage and configuration problems return kUsageError
/// before any file is written.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vsue::cli
