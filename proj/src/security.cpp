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
#include "vsue/security.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "vsue/errors.hpp"
#include "vsue/rng.hpp"

namespace vsue::security {

namespace {

void check_probability(double p, const char* who) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError(std::string(who) + ": probability must lie in [0, 1]");
    }
}

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

LogBound make_bound(double weight, double exponent) {
    LogBound b;
    b.exponent = exponent;
    const double half = std::min(0.0, exponent) / 2.0;
    b.log2_value = weight > 0.0 ? std::log2(weight) + half : -std::numeric_limits<double>::infinity();
    b.value = weight * std::exp2(half);
    return b;
}

// Euclidean projection of v onto {x >= 0, sum x = total}.
void project_simplex(double* v, std::size_t len, double total) {
    std::array<double, 4> sorted{};
    std::copy_n(v, len, sorted.begin());
    std::sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(len), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        cumulative += sorted[k];
        const double candidate = (cumulative - total) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) {
            theta = candidate;
        }
    }
    for (std::size_t k = 0; k < len; ++k) {
        v[k] = std::max(0.0, v[k] - theta);
    }
}

using Lambda = std::array<double, 16>;

void project_feasible(Lambda& l, const std::array<double, 4>& c) {
    for (std::size_t block = 0; block < 4; ++block) {
        project_simplex(l.data() + 4 * block, 4, c[block]);
    }
}

struct AscentOutcome {
    Lambda lambda{};
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

AscentOutcome ascend(Lambda start, const std::array<double, 4>& c, const RejectCaseOptions& opt) {
    constexpr double kArmijo = 1e-4;
    AscentOutcome out;
    Lambda l = start;
    double f = reject_objective(l);
    double step = 1e-3;
    int stalls = 0;
    for (int it = 0; it < opt.max_iterations; ++it) {
        const Lambda g = reject_gradient(l);
        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries) {
            Lambda trial;
            for (std::size_t i = 0; i < 16; ++i) {
                trial[i] = l[i] + step * g[i];
            }
            project_feasible(trial, c);
            double directional = 0.0;
            for (std::size_t i = 0; i < 16; ++i) {
                directional += g[i] * (trial[i] - l[i]);
            }
            const double ft = reject_objective(trial);
            if (ft >= f + kArmijo * directional) {
                const double gain = ft - f;
                l = trial;
                f = ft;
                accepted = true;
                step = std::min(step * 2.0, 1.0);
                stalls = gain < opt.tolerance ? stalls + 1 : 0;
                break;
            }
            step *= 0.5;
        }
        out.iterations = it + 1;
        if (!accepted || stalls >= 20) {
            out.converged = true;
            break;
        }
    }
    out.lambda = l;
    out.value = f;
    return out;
}

}  // namespace

double binary_entropy(double p) {
    check_probability(p, "binary_entropy");
    return plogp(p) + plogp(1.0 - p);
}

double entropy_vec(std::span<const double> p) {
    double total = 0.0;
    double h = 0.0;
    for (double v : p) {
        check_probability(v, "entropy_vec");
        total += v;
        h += plogp(v);
    }
    if (total > 1.0 + 1e-12) {
        throw DomainError("entropy_vec: probabilities sum above 1");
    }
    return h;
}

double star(double beta, double gamma) {
    check_probability(beta, "star");
    check_probability(gamma, "star");
    return beta * (1.0 - gamma) + (1.0 - beta) * gamma;
}

double j_entropy(double beta) {
    if (!(beta >= 0.0 && beta <= 2.0 / 3.0 + 1e-15)) {
        throw DomainError("j_entropy: beta must lie in [0, 2/3]");
    }
    const double q = std::max(0.0, 1.0 - 1.5 * beta);
    return plogp(q) + 3.0 * plogp(beta / 2.0);
}

TheoremBounds theorem_bounds(double n, double ell, double beta_star, double gamma_star,
                             double pr_accept) {
    check_probability(pr_accept, "theorem_bounds");
    const double base = ell - n + n * j_entropy(beta_star);
    TheoremBounds out;
    out.accept = make_bound(pr_accept, base + n * j_entropy(gamma_star));
    out.reject = make_bound(1.0 - pr_accept, base + n * binary_entropy(star(beta_star, gamma_star)));
    return out;
}

MessageLength max_message_length(double n, double beta_star, double gamma_star) {
    MessageLength m;
    const double jb = j_entropy(beta_star);
    m.accept_limit = n - n * jb - n * j_entropy(gamma_star);
    m.reject_limit = n - n * jb - n * binary_entropy(star(beta_star, gamma_star));
    m.ell_max = std::min(m.accept_limit, m.reject_limit);
    return m;
}

double max_message_length_symmetric(double n, double beta_star) {
    return n * (1.0 - 2.0 * j_entropy(beta_star));
}

Rate rate_vsue_refresh(double beta_star) {
    const double raw = 1.0 - 2.0 * j_entropy(beta_star) - binary_entropy(star(beta_star, beta_star));
    return {raw, std::max(0.0, raw)};
}

Rate rate_qkd_refresh(double beta_star) {
    const double j = j_entropy(beta_star);
    const double raw =
        (1.0 - 2.0 * j) * (1.0 - j) / (1.0 - j + binary_entropy(star(beta_star, beta_star)));
    return {raw, std::max(0.0, raw)};
}

double qkd_rate(double beta, double gamma) {
    const double p = star(beta, gamma);
    return 1.0 - binary_entropy(p) - j_entropy(beta) - j_entropy(gamma) + j_entropy(p);
}

double qkd_rate_from_states(double beta, double gamma) {
    const attack::BellDiagonalState st = attack::solve_check_b({beta, gamma});
    const double s_accept = qmath::von_neumann_entropy(attack::eve_marginal_state(st));
    const double s_at = qmath::von_neumann_entropy(attack::eve_avg_xy_density(st, 0, 0, 0));
    return 1.0 - binary_entropy(star(beta, gamma)) - s_accept + s_at;
}

double lm05_rate(double beta, double gamma) {
    return 1.0 - binary_entropy(star(beta, gamma)) -
           std::min(binary_entropy(beta), binary_entropy(gamma));
}

LogBound qkd_bound(double n, double ell, double beta, double gamma, double pr_accept) {
    check_probability(pr_accept, "qkd_bound");
    const double p = star(beta, gamma);
    const double exponent = ell - n + n * binary_entropy(p) + n * j_entropy(beta) +
                            n * j_entropy(gamma) - n * j_entropy(p);
    return make_bound(pr_accept, exponent);
}

double postselection_penalty(double n, unsigned d) {
    if (!(n >= 0.0) || d == 0) {
        throw DomainError("postselection_penalty: need n >= 0 and d >= 1");
    }
    const double dd = static_cast<double>(d);
    return 2.0 * (dd * dd - 1.0) * std::log2(n + 1.0);
}

double reject_objective(std::span<const double> lambda) {
    if (lambda.size() != 16) {
        throw ShapeError("reject_objective: need 16 coefficients");
    }
    std::array<double, 4> big{};
    double h = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        big[((i >> 2) ^ i) & 3] += lambda[i];
        h += plogp(lambda[i]);
    }
    for (double v : big) {
        h -= plogp(v);
    }
    return h;
}

std::array<double, 16> reject_gradient(std::span<const double> lambda) {
    if (lambda.size() != 16) {
        throw ShapeError("reject_gradient: need 16 coefficients");
    }
    constexpr double kFloor = 1e-300;
    std::array<double, 4> big{};
    for (std::size_t i = 0; i < 16; ++i) {
        big[((i >> 2) ^ i) & 3] += lambda[i];
    }
    std::array<double, 16> g{};
    for (std::size_t i = 0; i < 16; ++i) {
        g[i] = std::log2(std::max(big[((i >> 2) ^ i) & 3], kFloor) / std::max(lambda[i], kFloor));
    }
    return g;
}

attack::BellDiagonalState reject_case_family(double beta, const std::array<double, 4>& q) {
    const auto c = attack::solve_check_a(beta);
    double total = 0.0;
    for (double v : q) {
        check_probability(v, "reject_case_family");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("reject_case_family: q must sum to 1");
    }
    std::array<double, 16> l{};
    for (std::size_t i = 0; i < 16; ++i) {
        l[i] = c[i >> 2] * q[((i >> 2) ^ i) & 3];
    }
    return attack::BellDiagonalState(l);
}

RejectCaseResult reject_case_max(double beta, const RejectCaseOptions& options) {
    if (!(beta > 0.0 && beta < 2.0 / 3.0)) {
        throw DomainError("reject_case_max: beta must lie in (0, 2/3)");
    }
    const auto c = attack::solve_check_a(beta);
    Rng rng(options.seed, 0x52454A);

    auto random_feasible = [&]() {
        Lambda l{};
        for (std::size_t block = 0; block < 4; ++block) {
            double total = 0.0;
            for (std::size_t j = 0; j < 4; ++j) {
                l[4 * block + j] = -std::log(1.0 - rng.uniform01());  // Dirichlet(1)
                total += l[4 * block + j];
            }
            for (std::size_t j = 0; j < 4; ++j) {
                l[4 * block + j] *= c[block] / total;
            }
        }
        return l;
    };

    RejectCaseResult result;
    result.beta = beta;
    result.closed_form = j_entropy(beta);

    {
        const Lambda probe = random_feasible();
        const auto g = reject_gradient(probe);
        constexpr double h = 1e-6;
        for (std::size_t i = 0; i < 16; ++i) {
            Lambda up = probe;
            Lambda down = probe;
            up[i] += h;
            down[i] = std::max(0.0, down[i] - h);
            const double fd = (reject_objective(up) - reject_objective(down)) / (up[i] - down[i]);
            result.gradient_check_error = std::max(result.gradient_check_error, std::abs(fd - g[i]));
        }
    }

    AscentOutcome best;
    best.value = -std::numeric_limits<double>::infinity();
    bool all_converged = true;
    for (int s = 0; s < std::max(1, options.starts); ++s) {
        const AscentOutcome run = ascend(random_feasible(), c, options);
        all_converged = all_converged && run.converged;
        if (run.value > best.value) {
            best = run;
        }
    }

    // Remove rounding drift before building the state.
    double total = 0.0;
    for (double v : best.lambda) {
        total += v;
    }
    for (double& v : best.lambda) {
        v /= total;
    }
    result.optimizer = attack::BellDiagonalState(best.lambda);
    result.max_value = best.value;
    result.iterations = best.iterations;
    result.converged = all_converged;
    result.family_q = attack::lambda_uv(result.optimizer);

    const double lead = 1.0 - 1.5 * beta;
    const double ratio = (beta / 2.0) / lead;
    double residual = 0.0;
    const auto& l = result.optimizer;
    for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
            const double base = l.coeff(0, 0, u, v);
            residual = std::max(residual, std::abs(l.coeff(0, 1, u, v ^ 1) - ratio * base));
            residual = std::max(residual, std::abs(l.coeff(1, 0, u ^ 1, v) - ratio * base));
            residual = std::max(residual, std::abs(l.coeff(1, 1, u ^ 1, v ^ 1) - ratio * base));
            residual = std::max(residual, std::abs(result.family_q[2 * u + v] * lead - base));
        }
    }
    result.family_residual = residual;
    result.entropy_check =
        qmath::von_neumann_entropy(attack::eve_marginal_state(result.optimizer)) -
        qmath::von_neumann_entropy(attack::eve_avg_xy_density(result.optimizer, 0, 0, 0));
    result.status = all_converged ? "converged" : "iteration budget exhausted";
    return result;
}

EntropyInputs compute_entropy_inputs(const attack::BellDiagonalState& state) {
    EntropyInputs in{state};
    in.s_eve = qmath::von_neumann_entropy(attack::eve_marginal_state(state));
    for (int k = 0; k < 16; ++k) {
        in.s_bxat += qmath::von_neumann_entropy(
            attack::eve_avg_y_state(state, k >> 3 & 1, k >> 2 & 1, k >> 1 & 1, k & 1));
    }
    in.s_bxat /= 16.0;
    for (int k = 0; k < 8; ++k) {
        in.s_bat += qmath::von_neumann_entropy(
            attack::eve_avg_xy_density(state, k >> 2 & 1, k >> 1 & 1, k & 1));
    }
    in.s_bat /= 8.0;
    return in;
}

SecurityReport make_security_report(double n, double ell, double beta_star, double gamma_star,
                                    double pr_accept, bool with_postselection) {
    SecurityReport r;
    r.beta_star = beta_star;
    r.gamma_star = gamma_star;
    r.n = n;
    r.ell = ell;
    r.pr_accept = pr_accept;
    const attack::BellDiagonalState st = attack::solve_check_b({beta_star, gamma_star});
    r.s_accept = qmath::von_neumann_entropy(attack::eve_marginal_state(st));
    r.s_conditional = qmath::von_neumann_entropy(attack::eve_avg_y_state(st, 0, 0, 0, 0));
    r.bounds = theorem_bounds(n, ell, beta_star, gamma_star, pr_accept);
    r.length = max_message_length(n, beta_star, gamma_star);
    r.via_vsue = rate_vsue_refresh(beta_star);
    r.via_qkd = rate_qkd_refresh(beta_star);
    r.qkd_two_way = qkd_rate(beta_star, gamma_star);
    r.lm05_comparator = lm05_rate(beta_star, gamma_star);
    if (with_postselection) {
        r.postselection_bits = postselection_penalty(n);
    }
    return r;
}

std::vector<RateRow> rate_table(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) {
        throw ConfigError("rate_table: need step > 0 and hi >= lo");
    }
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
    std::vector<RateRow> rows;
    rows.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double beta = lo + static_cast<double>(i) * step;
        rows.push_back({beta, rate_vsue_refresh(beta).raw, rate_qkd_refresh(beta).raw,
                        qkd_rate(beta, beta), lm05_rate(beta, beta)});
    }
    return rows;
}

void write_rates_csv(const std::filesystem::path& path, std::span<const RateRow> rows) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << "# schema: " << kRatesSchema << "\n";
    out << "beta,rate_vsue,rate_qkd,qkd_two_way,lm05\n";
    char line[256];
    for (const RateRow& r : rows) {
        std::snprintf(line, sizeof line, "%.6f,%.12f,%.12f,%.12f,%.12f\n", r.beta, r.rate_vsue,
                      r.rate_qkd, r.qkd_two_way, r.lm05);
        out << line;
    }
}

std::vector<RateRow> read_rates_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != std::string("# schema: ") + kRatesSchema) {
        throw ConfigError("rates file: missing or unknown schema line");
    }
    if (!std::getline(in, line) || line != "beta,rate_vsue,rate_qkd,qkd_two_way,lm05") {
        throw ConfigError("rates file: unexpected column header");
    }
    std::vector<RateRow> rows;
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::array<double, 5> v{};
        std::istringstream fields(line);
        std::string cell;
        std::size_t k = 0;
        while (std::getline(fields, cell, ',')) {
            if (k >= 5) {
                throw ConfigError("rates file line " + std::to_string(lineno) + ": too many fields");
            }
            std::size_t used = 0;
            try {
                v[k] = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != cell.size() || cell.empty() || !std::isfinite(v[k])) {
                throw ConfigError("rates file line " + std::to_string(lineno) + ": bad number");
            }
            ++k;
        }
        if (k != 5) {
            throw ConfigError("rates file line " + std::to_string(lineno) + ": expected 5 fields");
        }
        if (!rows.empty() && !(v[0] > rows.back().beta)) {
            throw ConfigError("rates file line " + std::to_string(lineno) + ": beta not increasing");
        }
        rows.push_back({v[0], v[1], v[2], v[3], v[4]});
    }
    return rows;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw DomainError("bisect_root: no sign change on the interval");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::optional<double> zero_crossing(const std::function<double(double)>& f, double lo, double hi,
                                    double grid_step, double tol) {
    double prev_x = lo;
    double prev = f(lo);
    for (double x = lo + grid_step; x <= hi + 1e-15; x += grid_step) {
        const double cur = f(std::min(x, hi));
        if ((prev > 0.0) != (cur > 0.0)) {
            return bisect_root(f, prev_x, std::min(x, hi), tol);
        }
        prev_x = std::min(x, hi);
        prev = cur;
    }
    return std::nullopt;
}

}  // namespace vsue::security
