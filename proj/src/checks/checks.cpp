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
#include "vsue/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "checks/oracles.hpp"
#include "vsue/attack.hpp"
#include "vsue/qmath.hpp"
#include "vsue/rng.hpp"
#include "vsue/security.hpp"

namespace vsue::checks {

namespace {

using attack::BellDiagonalState;
using Clock = std::chrono::steady_clock;

// Box-Muller on our own generator so reports are identical everywhere.
double normal(Rng& rng) {
    const double u1 = 1.0 - rng.uniform01();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::array<double, 16> random_lambda(Rng& rng, double sparsity) {
    std::array<double, 16> l{};
    double total = 0.0;
    for (double& v : l) {
        v = rng.uniform01() < sparsity ? 0.0 : rng.uniform01();
        total += v;
    }
    if (total == 0.0) l[0] = total = 1.0;
    for (double& v : l) v /= total;
    return l;
}

// Every other state is sparse, so vanishing coefficients get exercised too.
std::array<double, 16> lambda_for(Rng& rng, int trial) { return random_lambda(rng, trial % 2 ? 0.4 : 0.0); }

oracle::Mat to_eigen(const qmath::ComplexMatrix& m) {
    oracle::Mat out(m.dim(), m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c) out(r, c) = m(r, c);
    return out;
}

oracle::Vec to_eigen(const qmath::PureState& v) {
    oracle::Vec out(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) out(i) = v[i];
    return out;
}

oracle::Vec bits_label(const std::array<double, 16>& l, int b, int k) {
    return oracle::contraction(l, b, k >> 3 & 1, k >> 2 & 1, k >> 1 & 1, k & 1);
}

double ref_entropy(std::initializer_list<double> p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

double ref_j(double beta) { return ref_entropy({1 - 1.5 * beta, beta / 2, beta / 2, beta / 2}); }

struct Timer {
    Clock::time_point start = Clock::now();
    double seconds() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

CheckResult finish(CheckResult r, const Timer& t) {
    r.passed = std::isfinite(r.max_error) && r.max_error <= r.tolerance;
    r.seconds = t.seconds();
    return r;
}

}  // namespace

CheckResult check_symmetrize(const SuiteOptions& opt) {
    Timer timer;
    CheckResult r{"symmetrize_diagonal", "twirl leaves no off-diagonal Bell mass; symmetrize equals the Bell-basis diagonal",
                  false, 0.0, 1e-12, 0, 0.0};
    Rng rng(opt.seed, 0x101);
    for (int trial = 0; trial < opt.random_states; ++trial) {
        oracle::Mat g(16, 16);
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) g(i, j) = oracle::cd(normal(rng), normal(rng));
        oracle::Mat rho = g * g.adjoint();
        rho /= rho.trace();
        qmath::ComplexMatrix m(16);
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) m(i, j) = rho(i, j);
        const qmath::DensityMatrix dm(m);

        r.max_error = std::max(r.max_error, attack::bell_off_diagonal_mass(attack::twirl(dm)));
        auto lambda = attack::symmetrize(dm).coeffs();
        if (opt.inject_fault && trial == 0) lambda[0] += 1e-3;
        double total = 0.0;
        for (int i = 0; i < 16; ++i) {
            const oracle::Vec v = oracle::bell_pair(i);
            const double direct = (v.adjoint() * rho * v)(0, 0).real();
            r.max_error = std::max(r.max_error, std::abs(lambda[i] - direct));
            total += lambda[i];
        }
        r.max_error = std::max(r.max_error, std::abs(total - 1.0));
        ++r.cases;
    }
    return finish(r, timer);
}

CheckResult check_constraint_solutions(const SuiteOptions& opt) {
    Timer timer;
    CheckResult r{"constraint_solutions", "solve_check_a and solve_check_b agree with dense linear solves", false, 0.0,
                  1e-10, 0, 0.0};
    for (int step = 0; step <= 60; ++step) {
        const double beta = step / 90.0;
        Eigen::Matrix4d m;
        Eigen::Vector4d rhs;
        for (int b = 0; b < 3; ++b) {
            for (int i = 0; i < 4; ++i) m(b, i) = oracle::e_b(b, i >> 1, i & 1);
            rhs(b) = beta;
        }
        m.row(3).setOnes();
        rhs(3) = 1.0;
        const Eigen::Vector4d c = m.fullPivLu().solve(rhs);
        const auto got = attack::solve_check_a(beta);
        for (int i = 0; i < 4; ++i) r.max_error = std::max(r.max_error, std::abs(got[i] - c(i)));
        ++r.cases;
    }
    Rng rng(opt.seed, 0x102);
    for (int trial = 0; trial < opt.random_states; ++trial) {
        const double beta = 0.3 * rng.uniform01(), gamma = 0.3 * rng.uniform01();
        Eigen::MatrixXd m(16, 16);
        Eigen::VectorXd rhs(16);
        int row = 0;
        for (int b = 0; b < 3; ++b, ++row) {
            for (int i = 0; i < 16; ++i) m(row, i) = oracle::e_b(b, i >> 3 & 1, i >> 2 & 1);
            rhs(row) = beta;
        }
        for (int b = 0; b < 3; ++b, ++row) {
            for (int i = 0; i < 16; ++i) m(row, i) = oracle::e_b(b, i >> 1 & 1, i & 1);
            rhs(row) = gamma;
        }
        for (int b = 0; b < 3; ++b)
            for (int bp = 0; bp < 3; ++bp, ++row) {
                for (int i = 0; i < 16; ++i)
                    m(row, i) = oracle::e_b(b, i >> 3 & 1, i >> 2 & 1) * oracle::e_b(bp, i >> 1 & 1, i & 1);
                rhs(row) = beta * gamma;
            }
        m.row(row).setOnes();
        rhs(row) = 1.0;
        const Eigen::VectorXd sol = m.fullPivLu().solve(rhs);
        const auto got = attack::solve_check_b({beta, gamma});
        for (int i = 0; i < 16; ++i) r.max_error = std::max(r.max_error, std::abs(got[i] - sol(i)));
        ++r.cases;
    }
    return finish(r, timer);
}

CheckResult check_conditional_states(const SuiteOptions& opt) {
    Timer timer;
    CheckResult r{"conditional_state_contraction",
                  "closed-form conditional states match the 256-dim purification contraction", false, 0.0, 1e-10, 0, 0.0};
    Rng rng(opt.seed, 0x103);
    for (int trial = 0; trial < opt.random_states; ++trial) {
        const auto l = lambda_for(rng, trial);
        const BellDiagonalState st(l);
        for (int b = 0; b < 2; ++b)
            for (int k = 0; k < 16; ++k) {
                const auto psi = attack::eve_conditional_state(st, b, k >> 3 & 1, k >> 2 & 1, k >> 1 & 1, k & 1);
                const oracle::Vec ref = bits_label(l, b, k);
                r.max_error = std::max(r.max_error, std::abs(psi.norm2() - ref.squaredNorm()));
                r.max_error = std::max(r.max_error, (to_eigen(psi) - ref).cwiseAbs().maxCoeff());
            }
        ++r.cases;
    }
    return finish(r, timer);
}

CheckResult check_orthogonality(const SuiteOptions& opt) {
    Timer timer;
    CheckResult r{"conditional_state_orthogonality",
                  "states differing in x, y, t or (x, y, t) together are orthogonal", false, 0.0, 1e-10, 0, 0.0};
    Rng rng(opt.seed, 0x104);
    for (int trial = 0; trial < opt.random_states; ++trial) {
        const BellDiagonalState st(lambda_for(rng, trial));
        for (int k = 0; k < 32; ++k) {
            const int b = k >> 4 & 1, x = k >> 3 & 1, y = k >> 2 & 1, a = k >> 1 & 1, t = k & 1;
            const auto psi = attack::eve_conditional_state(st, b, x, y, a, t);
            for (const auto& [dx, dy, dt] : {std::tuple{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}}) {
                const auto other = attack::eve_conditional_state(st, b, x ^ dx, y ^ dy, a, t ^ dt);
                r.max_error = std::max(r.max_error, std::abs(psi.inner(other)));
            }
        }
        ++r.cases;
    }
    return finish(r, timer);
}

CheckResult check_avg_y_spectrum(const SuiteOptions& opt) {
    Timer timer;
    CheckResult r{"avg_y_spectrum", "state averaged over y has spectrum {p, 1-p, 0 x 14}, p = beta star gamma", false, 0.0,
                  1e-10, 0, 0.0};
    Rng rng(opt.seed, 0x105);
    for (int trial = 0; trial < opt.random_states; ++trial) {
        const double beta = 0.15 * rng.uniform01(), gamma = 0.15 * rng.uniform01();
        const double p = beta * (1 - gamma) + gamma * (1 - beta);
        const auto st = attack::solve_check_b({beta, gamma});
        std::array<double, 16> l = st.coeffs();
        for (int k = 0; k < 16; ++k) {
            const int b = k >> 3 & 1, x = k >> 2 & 1, a = k >> 1 & 1, t = k & 1;
            const oracle::Mat got = to_eigen(attack::eve_avg_y_state(st, b, x, a, t).matrix());
            oracle::Mat ref = oracle::Mat::Zero(16, 16);
            for (int y = 0; y < 2; ++y) {
                const oracle::Vec v = oracle::contraction(l, b, x, y, a, t);
                ref += 8.0 * v * v.adjoint();
            }
            r.max_error = std::max(r.max_error, (got - ref).cwiseAbs().maxCoeff());
            Eigen::SelfAdjointEigenSolver<oracle::Mat> es(got);
            Eigen::VectorXd ev = es.eigenvalues();
            std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
            r.max_error = std::max(r.max_error, std::abs(ev(0) - std::max(p, 1 - p)));
            r.max_error = std::max(r.max_error, std::abs(ev(1) - std::min(p, 1 - p)));
            for (int i = 2; i < 16; ++i) r.max_error = std::max(r.max_error, std::abs(ev(i)));
        }
        ++r.cases;
    }
    return finish(r, timer);
}

CheckResult check_avg_xy_decomposition(const SuiteOptions& opt) {
    Timer timer;
    CheckResult r{"avg_xy_decomposition",
                  "closed-form spectral decomposition of the x,y-averaged state reconstructs it with orthonormal vectors",
                  false, 0.0, 1e-10, 0, 0.0};
    Rng rng(opt.seed, 0x106);
    for (int trial = 0; trial < opt.random_states; ++trial) {
        const auto l = lambda_for(rng, trial);
        const BellDiagonalState st(l);
        for (int k = 0; k < 8; ++k) {
            const int b = k >> 2 & 1, a = k >> 1 & 1, t = k & 1;
            const auto sd = attack::eve_avg_xy_state(st, b, a, t);
            oracle::Mat ref = oracle::Mat::Zero(16, 16);
            for (int xy = 0; xy < 4; ++xy) {
                const oracle::Vec v = oracle::contraction(l, b, xy >> 1, xy & 1, a, t);
                ref += 4.0 * v * v.adjoint();
            }
            r.max_error = std::max(r.max_error, (to_eigen(sd.reconstruct()) - ref).cwiseAbs().maxCoeff());
            oracle::Mat rebuilt = oracle::Mat::Zero(16, 16);
            for (int i = 0; i < 4; ++i) {
                const oracle::Vec vi = to_eigen(sd.vectors[i]);
                rebuilt += sd.values[i] * vi * vi.adjoint();
                for (int j = 0; j < 4; ++j) {
                    const oracle::cd ip = vi.dot(to_eigen(sd.vectors[j]));
                    r.max_error = std::max(r.max_error, std::abs(ip - (i == j ? 1.0 : 0.0)));
                }
            }
            r.max_error = std::max(r.max_error, (rebuilt - ref).cwiseAbs().maxCoeff());
        }
        ++r.cases;
    }
    return finish(r, timer);
}

CheckResult check_outcome_marginal(const SuiteOptions& opt) {
    Timer timer;
    CheckResult r{"outcome_marginal", "P(x, a, t | b) = 1/8 for every state", false, 0.0, 1e-12, 0, 0.0};
    Rng rng(opt.seed, 0x107);
    for (int trial = 0; trial < opt.random_states; ++trial) {
        const auto l = lambda_for(rng, trial);
        const BellDiagonalState st(l);
        for (int k = 0; k < 16; ++k) {
            const int b = k >> 3 & 1, x = k >> 2 & 1, a = k >> 1 & 1, t = k & 1;
            const double got = attack::outcome_probability(st, b, x, 0, a, t) + attack::outcome_probability(st, b, x, 1, a, t);
            const double ref = oracle::contraction(l, b, x, 0, a, t).squaredNorm() +
                               oracle::contraction(l, b, x, 1, a, t).squaredNorm();
            r.max_error = std::max({r.max_error, std::abs(got - 0.125), std::abs(ref - 0.125)});
        }
        ++r.cases;
    }
    return finish(r, timer);
}

CheckResult check_entropy_identities(const SuiteOptions& opt) {
    Timer timer;
    CheckResult r{"entropy_identities", "S(accept-case state) = J(beta) + J(gamma); S(y-averaged) = h(beta star gamma)",
                  false, 0.0, 1e-10, 0, 0.0};
    Rng rng(opt.seed, 0x108);
    for (int trial = 0; trial < opt.entropy_pairs; ++trial) {
        const double beta = 0.1 * rng.uniform01(), gamma = 0.1 * rng.uniform01();
        const double p = beta * (1 - gamma) + gamma * (1 - beta);
        const auto st = attack::solve_check_b({beta, gamma});
        const double s_all = qmath::von_neumann_entropy(attack::eve_marginal_state(st));
        r.max_error = std::max(r.max_error, std::abs(s_all - (ref_j(beta) + ref_j(gamma))));
        for (int k = 0; k < 16; ++k) {
            const double s = qmath::von_neumann_entropy(attack::eve_avg_y_state(st, k >> 3 & 1, k >> 2 & 1, k >> 1 & 1, k & 1));
            r.max_error = std::max(r.max_error, std::abs(s - ref_entropy({p, 1 - p})));
        }
        ++r.cases;
    }
    return finish(r, timer);
}

CheckResult check_reject_case(const SuiteOptions& opt) {
    Timer timer;
    CheckResult r{"reject_case_max",
                  "maximum of S(E) - S(E|bat) equals J(beta) (1e-6); optimizer lies in the solution family (1e-5)", false,
                  0.0, 1e-6, 0, 0.0};
    bool family_ok = true;
    for (double beta : opt.beta_grid) {
        security::RejectCaseOptions ro;
        ro.seed = opt.seed;
        const auto res = security::reject_case_max(beta, ro);
        r.max_error = std::max({r.max_error, std::abs(res.max_value - ref_j(beta)), std::abs(res.entropy_check - ref_j(beta))});
        family_ok = family_ok && res.family_residual <= 1e-5;
        ++r.cases;
    }
    r = finish(r, timer);
    r.passed = r.passed && family_ok;
    return r;
}

std::vector<CheckResult> run_suite(const SuiteOptions& opt) {
    std::vector<CheckResult> out = {check_symmetrize(opt),       check_constraint_solutions(opt),
                                    check_conditional_states(opt), check_orthogonality(opt),
                                    check_avg_y_spectrum(opt),   check_avg_xy_decomposition(opt),
                                    check_outcome_marginal(opt), check_entropy_identities(opt)};
    if (opt.include_reject_case) out.push_back(check_reject_case(opt));
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json report_json(const std::vector<CheckResult>& results, const SuiteOptions& opt) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : results) {
        checks.push_back({{"id", c.id},
                          {"description", c.description},
                          {"passed", c.passed},
                          {"max_error", c.max_error},
                          {"tolerance", c.tolerance},
                          {"cases", c.cases}});
    }
    return {{"schema", kLemmaReportSchema},
            {"seed", opt.seed},
            {"inject_fault", opt.inject_fault},
            {"beta_grid", opt.beta_grid},
            {"passed", all_passed(results)},
            {"checks", checks}};
}

}  // namespace vsue::checks
