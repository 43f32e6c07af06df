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

// Alice/Bob state machines for the prepare-and-measure protocol and its EPR
// proof variant, over a simulated channel.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vsue/attack.hpp"
#include "vsue/bits.hpp"
#include "vsue/classical.hpp"
#include "vsue/monitor.hpp"
#include "vsue/rng.hpp"

namespace vsue::protocol {

struct ProtocolParams {
    std::size_t n = 56;            // payload positions, also the hash field size
    std::size_t test_count = 900;  // monitoring positions, a multiple of 9
    std::size_t ell = 32;          // message length including its MAC tag
    double beta_star = 0.05;
    double gamma_star = 0.05;
    double delta = 0.3;
    std::size_t message_tag_bits = 16;
    unsigned mac_field_bits = 32;
    unsigned channel_tag_bits = 32;
    classical::LinearCode code = classical::LinearCode::repeated(classical::LinearCode::hamming74(), 8);

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
    std::size_t positions() const { return n + test_count; }
};

struct KeyMaterial {
    classical::HashSeed u;
    Bits k_syn;
    Bits k_test;
    std::vector<std::size_t> i_test;  // sorted, 0-based, in [0, n + test_count)
    std::vector<std::uint8_t> b_test1;
    std::vector<std::uint8_t> b_test2;
    Bits xi;
    Bits eta;
    classical::MacKey mac_message;
    classical::MacKey mac_alice;  // authenticates mu
    classical::MacKey mac_bob;    // authenticates omega

    /// Throws ConfigError if lengths or ranges disagree with params.
    void validate(const ProtocolParams& params) const;
};

KeyMaterial generate_keys(const ProtocolParams& params, Rng& rng);
/// Fresh single-use keys; u is kept. Keys are refreshed after every run,
/// so omega does not change what is refreshed.
KeyMaterial key_update(const KeyMaterial& keys, const ProtocolParams& params, bool omega, Rng& rng);

/// content || tag with the message key; content has ell - message_tag_bits bits.
Bits tag_message(const KeyMaterial& keys, const ProtocolParams& params, std::span<const std::uint8_t> content);
Bits random_tagged_message(const KeyMaterial& keys, const ProtocolParams& params, Rng& rng);

enum class ChannelMode { independent_flip, bell_diagonal, intercept_resend };

struct ChannelModel {
    ChannelMode mode = ChannelMode::independent_flip;
    attack::NoiseParams noise;     // independent_flip
    attack::BellDiagonalState state;  // bell_diagonal: correlated Pauli noise on both channels

    static ChannelModel independent(double beta, double gamma);
    static ChannelModel bell_diagonal(const attack::BellDiagonalState& s);
    /// Channel 1 only: Eve measures each qubit in a random one of the three
    /// bases and resends the outcome.
    static ChannelModel intercept_resend();
    void validate() const;
};

enum class Variant { pm, epr };

/// Classical message mu. PM: (xi' ^ k_test, s ^ k_syn, c). EPR: (a, c); xi,
/// eta and s travel over the confidential channel and are not part of it.
struct ClassicalMessage {
    Bits masked_xi_prime;
    Bits masked_syndrome;
    Bits a;
    Bits c;
    Bits tag;
};

/// Secrets that the attacker model never sees. Only tests and diagnostics read these.
struct VolatileSecrets {
    Bits x, b, y;     // Bob
    Bits t, r, z, s;  // Alice
    Bits c;
    Bits w;           // EPR: Alice's second Bell bit
    Bits a;           // EPR: a = t ^ w, kept even when mu is bottom
    Bits z_prime, z_hat;
    std::vector<std::size_t> permutation;  // EPR: source position of each local slot
};

class RunTranscript;

/// Test-only window into a transcript's volatile secrets.
struct TranscriptTestAccess {
    static const VolatileSecrets& secrets(const RunTranscript& t);
};

class RunTranscript {
public:
    Variant variant = Variant::pm;
    std::optional<ClassicalMessage> mu;  // nullopt is bottom
    bool mu_authenticated = false;
    bool omega = false;
    Bits omega_tag;
    std::optional<Bits> m_hat;   // nullopt is bottom
    monitor::MonitorVerdict monitor;
    /// omega = 1 but the message tag did not verify: m_hat is bottom.
    bool mac_failure = false;
    /// Diagnostics: the error correction recovered z, and the number of
    /// payload positions whose bit reached Bob flipped (payload error weight).
    bool decode_success = false;
    std::size_t payload_flips = 0;

private:
    VolatileSecrets secrets_;
    friend struct TranscriptTestAccess;
    friend RunTranscript run_pm_protocol(const ProtocolParams&, const KeyMaterial&, const Bits&,
                                         const ChannelModel&, Rng&);
    friend RunTranscript run_epr_protocol(const ProtocolParams&, const KeyMaterial&, const Bits&,
                                          const attack::BellDiagonalState&, Rng&);
};

/// Prepare-and-measure run. Throws ConfigError on inconsistent inputs.
RunTranscript run_pm_protocol(const ProtocolParams& params, const KeyMaterial& keys, const Bits& m,
                              const ChannelModel& channel, Rng& rng);
/// EPR run. Test bases and positions are generated in-run; u and the MAC
/// keys come from keys. Throws ConfigError on inconsistent inputs.
RunTranscript run_epr_protocol(const ProtocolParams& params, const KeyMaterial& keys, const Bits& m,
                               const attack::BellDiagonalState& source, Rng& rng);

struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Pearson test of counts against the uniform distribution.
ChiSquare chi_square_uniform(std::span<const std::size_t> counts);

struct Comparison {
    std::string name;
    double pm = 0.0;
    double epr = 0.0;
    double z = 0.0;
    bool passed = false;
};

struct EquivalenceReport {
    std::size_t trials = 0;
    std::vector<Comparison> comparisons;
    bool passed = false;
};

/// Runs both variants (PM with independent flips, EPR with solve_check_b)
/// and compares the shared observables with two-sample z-tests, |z| <= z_max.
/// Single-use keys are refreshed per trial; the message key is kept so m
/// stays valid.
EquivalenceReport equivalence_check(const ProtocolParams& params, const KeyMaterial& keys, const Bits& m,
                                    const attack::NoiseParams& noise, std::size_t trials,
                                    std::uint64_t seed, double z_max = 3.0);

}  // namespace vsue::protocol
