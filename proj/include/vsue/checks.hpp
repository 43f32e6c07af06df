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

// Self-verification of the attack-model identities and the reject-case
// optimum against independent reference computations.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace vsue::checks {

inline constexpr const char* kLemmaReportSchema = "vsue-lemmas/1";

struct CheckResult {
    std::string id;
    std::string description;
    bool passed = false;
    double max_error = 0.0;
    double tolerance = 0.0;
    std::size_t cases = 0;
    double seconds = 0.0;
};

struct SuiteOptions {
    std::uint64_t seed = 2026;
    int random_states = 50;
    int entropy_pairs = 20;
    std::vector<double> beta_grid = {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10};
    /// Negative control: one Bell coefficient of the symmetrized output is
    /// shifted by 1e-3, which the diagonality check must catch.
    bool inject_fault = false;
    bool include_reject_case = true;
};

CheckResult check_symmetrize(const SuiteOptions& opt);
CheckResult check_constraint_solutions(const SuiteOptions& opt);
CheckResult check_conditional_states(const SuiteOptions& opt);
CheckResult check_orthogonality(const SuiteOptions& opt);
CheckResult check_avg_y_spectrum(const SuiteOptions& opt);
CheckResult check_avg_xy_decomposition(const SuiteOptions& opt);
CheckResult check_outcome_marginal(const SuiteOptions& opt);
CheckResult check_entropy_identities(const SuiteOptions& opt);
/// Maximum equals J(beta) within 1e-6 and the family relations hold within 1e-5.
CheckResult check_reject_case(const SuiteOptions& opt);

std::vector<CheckResult> run_suite(const SuiteOptions& opt);
bool all_passed(const std::vector<CheckResult>& results);
nlohmann::json report_json(const std::vector<CheckResult>& results, const SuiteOptions& opt);

}  // namespace vsue::checks
