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

// Channel monitoring: per-basis error strings from the test positions and
// the CheckA / CheckB verdicts.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "vsue/bits.hpp"
#include "vsue/rng.hpp"

namespace vsue::monitor {

/// Test-position data. Bases are 0 (z), 1 (x), 2 (y). xi is what Bob
/// prepared, xi_prime what Alice measured; eta what Alice prepared,
/// eta_prime what Bob measured.
struct TestRecord {
    std::vector<std::uint8_t> bases1;
    std::vector<std::uint8_t> bases2;
    Bits xi;
    Bits xi_prime;
    Bits eta;
    Bits eta_prime;
    /// EPR variant: a y-basis test outcome of |Phi00> is anticorrelated, so
    /// Delta gets an extra flip wherever the basis is y.
    bool epr = false;

    std::size_t size() const { return bases1.size(); }
    /// Throws ShapeError on unequal lengths, DomainError on a bad basis label.
    void validate() const;
};

using Cells = std::array<std::array<std::size_t, 3>, 3>;

struct Deltas {
    std::array<Bits, 3> delta1;  // channel-1 errors, grouped by b
    std::array<Bits, 3> delta2;  // channel-2 errors, grouped by b'
    std::array<std::array<Bits, 3>, 3> d1;  // channel-1 errors, grouped by (b, b')
    std::array<std::array<Bits, 3>, 3> d2;  // channel-2 errors, grouped by (b, b')

    std::array<std::size_t, 3> count1() const;   // |Delta_1(b)|
    std::array<std::size_t, 3> count2() const;   // |Delta_2(b')|
    Cells joint() const;                         // |d_1(b, b') AND d_2(b, b')|
    std::array<std::size_t, 3> size1() const;    // positions with channel-1 basis b
    std::array<std::size_t, 3> size2() const;
    Cells cell_sizes() const;
};

Deltas compute_deltas(const TestRecord& record);

struct MonitorVerdict {
    bool check_a = false;
    bool check_b = false;
    double beta_hat = 0.0;   // overall channel-1 error rate
    double gamma_hat = 0.0;  // overall channel-2 error rate
    std::array<std::size_t, 3> delta1{};
    std::array<std::size_t, 3> delta2{};
    Cells joint{};
};

/// Rate-level CheckA: exists beta <= beta_star with |rate_b - beta| <= delta beta
/// for the three bases. Decided by intersecting [rate_b/(1+delta), rate_b/(1-delta)].
bool check_a_rates(const std::array<double, 3>& rates, double beta_star, double delta);
/// Rate-level CheckB: CheckA on both channels plus |joint - beta gamma| <= delta sqrt(2) beta gamma
/// in all nine cells. Throws DomainError on negative tolerances or thresholds.
bool check_b_rates(const std::array<double, 3>& rates1, const std::array<double, 3>& rates2,
                   const std::array<std::array<double, 3>, 3>& joint, double beta_star,
                   double gamma_star, double delta);

/// Count-level checks; rates use the actual cell sizes. Throw ConfigError
/// when a basis (or basis-pair) cell is empty.
bool check_a(const Deltas& deltas, double beta_star, double delta);
bool check_b(const Deltas& deltas, double beta_star, double gamma_star, double delta);

MonitorVerdict evaluate(const TestRecord& record, double beta_star, double gamma_star, double delta);

/// 3 / sqrt(test_count / 9).
double default_delta(std::size_t test_count);

/// Bases for test_count positions with every (b, b') pair used test_count/9
/// times, in random order. Throws ConfigError unless 9 divides test_count.
std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> balanced_bases(std::size_t test_count,
                                                                               Rng& rng);

/// Synthetic record with independent flips (rates beta, gamma) or, when
/// correlated, every channel-1 flip repeated on channel 2.
TestRecord sample_record(std::size_t test_count, double beta, double gamma, bool correlated, Rng& rng);

}  // namespace vsue::monitor
