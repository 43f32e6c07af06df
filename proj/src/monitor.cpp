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
#include "vsue/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <tuple>
#include <string>

#include "vsue/errors.hpp"

namespace vsue::monitor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo = 0.0;
    double hi = kInf;

    bool empty() const { return lo > hi; }
};

// {x >= 0 : |rate - x| <= tol * x} intersected over the rates.
Interval relative_interval(std::span<const double> rates, double tol, double cap) {
    Interval iv{0.0, cap};
    for (double r : rates) {
        iv.lo = std::max(iv.lo, r / (1.0 + tol));
        if (tol < 1.0) {
            iv.hi = std::min(iv.hi, r / (1.0 - tol));
        }
    }
    return iv;
}

void check_params(double beta_star, double gamma_star, double delta) {
    if (!(beta_star >= 0.0) || !(gamma_star >= 0.0) || !(delta >= 0.0)) {
        throw DomainError("monitor: thresholds and tolerance must be nonnegative");
    }
}

std::size_t ones(const Bits& b) { return weight(b); }

}  // namespace

void TestRecord::validate() const {
    const std::size_t n = bases1.size();
    if (bases2.size() != n || xi.size() != n || xi_prime.size() != n || eta.size() != n ||
        eta_prime.size() != n) {
        throw ShapeError("TestRecord: bases and bit strings must have equal length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (bases1[i] > 2 || bases2[i] > 2) {
            throw DomainError("TestRecord: basis labels must be 0, 1 or 2");
        }
    }
}

std::array<std::size_t, 3> Deltas::count1() const {
    return {ones(delta1[0]), ones(delta1[1]), ones(delta1[2])};
}

std::array<std::size_t, 3> Deltas::count2() const {
    return {ones(delta2[0]), ones(delta2[1]), ones(delta2[2])};
}

Cells Deltas::joint() const {
    Cells c{};
    for (int b = 0; b < 3; ++b) {
        for (int bp = 0; bp < 3; ++bp) {
            const Bits& x = d1[b][bp];
            const Bits& y = d2[b][bp];
            for (std::size_t i = 0; i < x.size(); ++i) {
                c[b][bp] += static_cast<std::size_t>(x[i] & y[i]);
            }
        }
    }
    return c;
}

std::array<std::size_t, 3> Deltas::size1() const {
    return {delta1[0].size(), delta1[1].size(), delta1[2].size()};
}

std::array<std::size_t, 3> Deltas::size2() const {
    return {delta2[0].size(), delta2[1].size(), delta2[2].size()};
}

Cells Deltas::cell_sizes() const {
    Cells c{};
    for (int b = 0; b < 3; ++b) {
        for (int bp = 0; bp < 3; ++bp) {
            c[b][bp] = d1[b][bp].size();
        }
    }
    return c;
}

Deltas compute_deltas(const TestRecord& record) {
    record.validate();
    Deltas d;
    for (std::size_t i = 0; i < record.size(); ++i) {
        const int b = record.bases1[i];
        const int bp = record.bases2[i];
        const std::uint8_t fix1 = record.epr && b == 2 ? 1 : 0;
        const std::uint8_t fix2 = record.epr && bp == 2 ? 1 : 0;
        const std::uint8_t e1 = (record.xi[i] ^ record.xi_prime[i] ^ fix1) & 1;
        const std::uint8_t e2 = (record.eta[i] ^ record.eta_prime[i] ^ fix2) & 1;
        d.delta1[b].push_back(e1);
        d.delta2[bp].push_back(e2);
        d.d1[b][bp].push_back(e1);
        d.d2[b][bp].push_back(e2);
    }
    return d;
}

bool check_a_rates(const std::array<double, 3>& rates, double beta_star, double delta) {
    check_params(beta_star, 0.0, delta);
    return !relative_interval(rates, delta, beta_star).empty();
}

bool check_b_rates(const std::array<double, 3>& rates1, const std::array<double, 3>& rates2,
                   const std::array<std::array<double, 3>, 3>& joint, double beta_star,
                   double gamma_star, double delta) {
    check_params(beta_star, gamma_star, delta);
    const Interval beta = relative_interval(rates1, delta, beta_star);
    const Interval gamma = relative_interval(rates2, delta, gamma_star);
    if (beta.empty() || gamma.empty()) {
        return false;
    }
    // All nine joint clauses constrain only the product beta*gamma, and the
    // product sweeps exactly [lo_b lo_g, hi_b hi_g] over the rectangle.
    std::array<double, 9> flat{};
    for (int b = 0; b < 3; ++b) {
        for (int bp = 0; bp < 3; ++bp) {
            flat[3 * b + bp] = joint[b][bp];
        }
    }
    Interval product = relative_interval(flat, delta * std::sqrt(2.0), kInf);
    product.lo = std::max(product.lo, beta.lo * gamma.lo);
    product.hi = std::min(product.hi, beta.hi * gamma.hi);
    return !product.empty();
}

bool check_a(const Deltas& deltas, double beta_star, double delta) {
    std::array<double, 3> rates{};
    const auto sizes = deltas.size1();
    const auto counts = deltas.count1();
    for (int b = 0; b < 3; ++b) {
        if (sizes[b] == 0) {
            throw ConfigError("check_a: no test positions in basis " + std::to_string(b));
        }
        rates[b] = static_cast<double>(counts[b]) / static_cast<double>(sizes[b]);
    }
    return check_a_rates(rates, beta_star, delta);
}

bool check_b(const Deltas& deltas, double beta_star, double gamma_star, double delta) {
    const auto s1 = deltas.size1();
    const auto s2 = deltas.size2();
    const auto c1 = deltas.count1();
    const auto c2 = deltas.count2();
    const Cells cells = deltas.cell_sizes();
    const Cells joint = deltas.joint();
    std::array<double, 3> r1{}, r2{};
    std::array<std::array<double, 3>, 3> rj{};
    for (int b = 0; b < 3; ++b) {
        if (s1[b] == 0 || s2[b] == 0) {
            throw ConfigError("check_b: no test positions in basis " + std::to_string(b));
        }
        r1[b] = static_cast<double>(c1[b]) / static_cast<double>(s1[b]);
        r2[b] = static_cast<double>(c2[b]) / static_cast<double>(s2[b]);
        for (int bp = 0; bp < 3; ++bp) {
            if (cells[b][bp] == 0) {
                throw ConfigError("check_b: empty basis-pair cell (" + std::to_string(b) + "," +
                                  std::to_string(bp) + ")");
            }
            rj[b][bp] = static_cast<double>(joint[b][bp]) / static_cast<double>(cells[b][bp]);
        }
    }
    return check_b_rates(r1, r2, rj, beta_star, gamma_star, delta);
}

MonitorVerdict evaluate(const TestRecord& record, double beta_star, double gamma_star, double delta) {
    const Deltas d = compute_deltas(record);
    MonitorVerdict v;
    v.check_a = check_a(d, beta_star, delta);
    v.check_b = v.check_a && check_b(d, beta_star, gamma_star, delta);
    v.delta1 = d.count1();
    v.delta2 = d.count2();
    v.joint = d.joint();
    const double n = static_cast<double>(std::max<std::size_t>(1, record.size()));
    v.beta_hat = static_cast<double>(v.delta1[0] + v.delta1[1] + v.delta1[2]) / n;
    v.gamma_hat = static_cast<double>(v.delta2[0] + v.delta2[1] + v.delta2[2]) / n;
    return v;
}

double default_delta(std::size_t test_count) {
    if (test_count < 9) {
        throw ConfigError("default_delta: need at least 9 test positions");
    }
    return 3.0 / std::sqrt(static_cast<double>(test_count) / 9.0);
}

std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> balanced_bases(std::size_t test_count,
                                                                               Rng& rng) {
    if (test_count == 0 || test_count % 9 != 0) {
        throw ConfigError("test_count must be a positive multiple of 9");
    }
    std::vector<std::uint8_t> cell(test_count);
    for (std::size_t i = 0; i < test_count; ++i) {
        cell[i] = static_cast<std::uint8_t>(i % 9);
    }
    for (std::size_t i = test_count - 1; i > 0; --i) {
        std::swap(cell[i], cell[rng.uniform_below(i + 1)]);
    }
    std::vector<std::uint8_t> b1(test_count), b2(test_count);
    for (std::size_t i = 0; i < test_count; ++i) {
        b1[i] = cell[i] / 3;
        b2[i] = cell[i] % 3;
    }
    return {std::move(b1), std::move(b2)};
}

TestRecord sample_record(std::size_t test_count, double beta, double gamma, bool correlated, Rng& rng) {
    TestRecord r;
    std::tie(r.bases1, r.bases2) = balanced_bases(test_count, rng);
    r.xi.resize(test_count);
    r.xi_prime.resize(test_count);
    r.eta.resize(test_count);
    r.eta_prime.resize(test_count);
    for (std::size_t i = 0; i < test_count; ++i) {
        const std::uint8_t f1 = rng.bernoulli(beta) ? 1 : 0;
        const std::uint8_t f2 = correlated ? f1 : (rng.bernoulli(gamma) ? 1 : 0);
        r.xi[i] = rng.bit();
        r.xi_prime[i] = r.xi[i] ^ f1;
        r.eta[i] = rng.bit();
        r.eta_prime[i] = r.eta[i] ^ f2;
    }
    return r;
}

}  // namespace vsue::monitor
