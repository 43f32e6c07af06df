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

// Entropies, epsilon bounds, admissible message length, communication and
// key rates, and the numerical reject-case maximization.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vsue/attack.hpp"

namespace vsue::security {

/// h(p) in bits, with 0 log 0 = 0.
double binary_entropy(double p);
/// Shannon entropy of a probability vector; the sum may not exceed 1 + 1e-12.
double entropy_vec(std::span<const double> p);
/// Serial composition of two binary symmetric channels.
double star(double beta, double gamma);
/// J(beta) = H(1 - 3 beta/2, beta/2, beta/2, beta/2).
double j_entropy(double beta);

/// A bound of the form pr * min(1, sqrt(2^exponent)), kept in log2 form.
struct LogBound {
    double exponent = 0.0;  // exponent inside the square root
    double log2_value = 0.0;
    double value = 0.0;
};

struct TheoremBounds {
    LogBound accept;
    LogBound reject;
};

/// eps_acc = pr * min(1, sqrt(2^{ell - n + n J(beta*) + n J(gamma*)}))
/// eps_rej = (1 - pr) * min(1, sqrt(2^{ell - n + n J(beta*) + n h(beta* star gamma*)}))
TheoremBounds theorem_bounds(double n, double ell, double beta_star, double gamma_star,
                             double pr_accept);

struct MessageLength {
    double ell_max = 0.0;       // largest ell with both exponents <= 0
    double accept_limit = 0.0;  // n - n J(beta*) - n J(gamma*)
    double reject_limit = 0.0;  // n - n J(beta*) - n h(beta* star gamma*)
};

MessageLength max_message_length(double n, double beta_star, double gamma_star);
/// n (1 - 2 J(beta*)): the gamma* = beta* case.
double max_message_length_symmetric(double n, double beta_star);

struct Rate {
    double raw = 0.0;
    double clamped = 0.0;  // max(0, raw)
};

/// Keys refreshed through the scheme itself: 1 - 2J - h(beta* star beta*).
Rate rate_vsue_refresh(double beta_star);
/// Keys refreshed by six-state QKD: (1 - 2J)(1 - J) / (1 - J + h(beta* star beta*)).
Rate rate_qkd_refresh(double beta_star);
/// Two-way QKD key rate 1 - h(beta star gamma) - J(beta) - J(gamma) + J(beta star gamma).
double qkd_rate(double beta, double gamma);
/// Same rate evaluated from the spectra of Eve's accept-case states.
double qkd_rate_from_states(double beta, double gamma);
/// Published comparator 1 - h(beta star gamma) - min(h(beta), h(gamma)).
double lm05_rate(double beta, double gamma);
/// pr * min(1, sqrt(2^{ell - n + n h(beta star gamma) + n J(beta) + n J(gamma) - n J(beta star gamma)})).
LogBound qkd_bound(double n, double ell, double beta, double gamma, double pr_accept);

/// Extra privacy-amplification cost 2 (d^2 - 1) log2(n + 1) of the
/// post-selection reduction from general to collective attacks.
double postselection_penalty(double n, unsigned d = 16);

/// Objective H(lambda) - H(Lambda) = S(sigma^E) - S(sigma^E_bat) for a Bell-diagonal state.
double reject_objective(std::span<const double> lambda);
/// Its gradient, d/d lambda_i = log2(Lambda_{uv(i)} / lambda_i).
std::array<double, 16> reject_gradient(std::span<const double> lambda);
/// Member of the maximizing family: lambda^{a1 b1}_{a2 b2} = c^{a1 b1} q_{uv}
/// with u = a1 ^ a2, v = b1 ^ b2 and c from the single-channel constraint.
attack::BellDiagonalState reject_case_family(double beta, const std::array<double, 4>& q);

struct RejectCaseOptions {
    int starts = 20;
    int max_iterations = 100000;
    double tolerance = 1e-13;  // stop when the objective gain per step falls below this
    std::uint64_t seed = 1;
};

struct RejectCaseResult {
    double beta = 0.0;
    double max_value = 0.0;          // best objective found
    double closed_form = 0.0;        // J(beta)
    double entropy_check = 0.0;      // S(sigma^E) - S(sigma^E_bat) from the density matrices
    attack::BellDiagonalState optimizer;
    std::array<double, 4> family_q{};  // Lambda_uv of the optimizer
    double family_residual = 0.0;      // max violation of the family relations
    double gradient_check_error = 0.0; // analytic vs central differences at a random point
    int iterations = 0;                // of the best start
    bool converged = false;
    std::string status;
};

/// Maximizes S(sigma^E) - S(sigma^E_bat) over Bell-diagonal states with
/// r_1(b) = beta for all b, by projected-gradient ascent with multi-start.
/// Throws DomainError unless 0 < beta < 2/3.
RejectCaseResult reject_case_max(double beta, const RejectCaseOptions& options = {});

struct EntropyInputs {
    attack::BellDiagonalState state;
    double s_eve = 0.0;   // S(sigma^E)
    double s_bxat = 0.0;  // average of S(sigma^E_bxat) over the 16 labels
    double s_bat = 0.0;   // average of S(sigma^E_bat) over the 8 labels
};

EntropyInputs compute_entropy_inputs(const attack::BellDiagonalState& state);

struct SecurityReport {
    double beta_star = 0.0;
    double gamma_star = 0.0;
    double n = 0.0;
    double ell = 0.0;
    double pr_accept = 1.0;
    double s_accept = 0.0;       // S(sigma^E_{omega=1})
    double s_conditional = 0.0;  // S(sigma^E_{bxat, omega=1})
    TheoremBounds bounds;
    MessageLength length;
    Rate via_vsue;
    Rate via_qkd;
    double qkd_two_way = 0.0;
    double lm05_comparator = 0.0;
    std::optional<double> postselection_bits;
};

SecurityReport make_security_report(double n, double ell, double beta_star, double gamma_star,
                                    double pr_accept = 1.0, bool with_postselection = false);

struct RateRow {
    double beta = 0.0;
    double rate_vsue = 0.0;
    double rate_qkd = 0.0;
    double qkd_two_way = 0.0;
    double lm05 = 0.0;
};

inline constexpr const char* kRatesSchema = "vsue-rates/1";

/// Rows for beta = lo, lo + step, ..., hi (inclusive within step/2). Rates raw.
std::vector<RateRow> rate_table(double lo, double hi, double step);
void write_rates_csv(const std::filesystem::path& path, std::span<const RateRow> rows);
/// Parses and validates a rates file (schema line, header, numeric rows).
/// Throws ConfigError describing the first problem.
std::vector<RateRow> read_rates_csv(const std::filesystem::path& path);

/// Root of f in [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol = 1e-9);
/// First sign change of f on a grid over [lo, hi], refined by bisection.
std::optional<double> zero_crossing(const std::function<double(double)>& f, double lo, double hi,
                                    double grid_step = 1e-3, double tol = 1e-9);

}  // namespace vsue::security
