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
#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numeric>

#include "vsue/errors.hpp"
#include "vsue/protocol.hpp"
#include "vsue/protocol_io.hpp"

using namespace vsue;
using namespace vsue::protocol;

namespace {

const VolatileSecrets& secrets(const RunTranscript& t) { return TranscriptTestAccess::secrets(t); }

double flip_star(double b, double g) { return b * (1 - g) + g * (1 - b); }

classical::LinearCode strong_code() {
    Rng rng(14, 4);
    std::vector<classical::LinearCode> parts;
    for (int i = 0; i < 4; ++i) parts.push_back(classical::LinearCode::random_systematic(14, 4, rng));
    return classical::LinearCode::direct_sum(parts);
}

struct Fixture {
    ProtocolParams params;
    KeyMaterial keys;
    Bits m;
    explicit Fixture(std::uint64_t seed, ProtocolParams p = {}) : params(std::move(p)) {
        Rng rng(seed, 1);
        keys = generate_keys(params, rng);
        m = random_tagged_message(keys, params, rng);
    }
};

}  // namespace

TEST(Protocol, ParamsValidation) {
    ProtocolParams p;
    EXPECT_NO_THROW(p.validate());
    auto bad = [](auto mutate) {
        ProtocolParams q;
        mutate(q);
        EXPECT_THROW(q.validate(), ConfigError);
    };
    bad([](ProtocolParams& q) { q.ell = 57; });
    bad([](ProtocolParams& q) { q.test_count = 100; });
    bad([](ProtocolParams& q) { q.n = 49; });
    bad([](ProtocolParams& q) { q.beta_star = 0.7; });
    bad([](ProtocolParams& q) { q.message_tag_bits = 32; });
    bad([](ProtocolParams& q) { q.channel_tag_bits = 40; });
    bad([](ProtocolParams& q) { q.delta = -0.1; });
}

TEST(Protocol, InconsistentInputsAreConfigErrors) {
    Fixture f(1);
    Rng rng(2);
    Bits short_m(f.params.ell - 1, 0);
    EXPECT_THROW(run_pm_protocol(f.params, f.keys, short_m, ChannelModel::independent(0, 0), rng), ConfigError);
    KeyMaterial k = f.keys;
    k.k_syn.pop_back();
    EXPECT_THROW(run_pm_protocol(f.params, k, f.m, ChannelModel::independent(0, 0), rng), ConfigError);
    k = f.keys;
    k.i_test[1] = k.i_test[0];
    EXPECT_THROW(run_epr_protocol(f.params, k, f.m, attack::solve_check_b({0, 0}), rng), ConfigError);
    EXPECT_THROW(ChannelModel::independent(1.5, 0), ConfigError);
}

TEST(Protocol, KeyUpdateKeepsSeedAndRefreshesTheRest) {
    Fixture f(3);
    Rng rng(4);
    const KeyMaterial k = key_update(f.keys, f.params, true, rng);
    EXPECT_EQ(k.u, f.keys.u);
    EXPECT_NO_THROW(k.validate(f.params));
    EXPECT_NE(k.k_syn, f.keys.k_syn);
    EXPECT_NE(k.k_test, f.keys.k_test);
    EXPECT_NE(k.i_test, f.keys.i_test);
    EXPECT_NE(k.b_test1, f.keys.b_test1);
    EXPECT_NE(k.b_test2, f.keys.b_test2);
    EXPECT_NE(k.xi, f.keys.xi);
    EXPECT_NE(k.eta, f.keys.eta);
    EXPECT_NE(k.mac_message.seed, f.keys.mac_message.seed);
    EXPECT_NE(k.mac_alice.seed, f.keys.mac_alice.seed);
    EXPECT_NE(k.mac_bob.seed, f.keys.mac_bob.seed);
    const KeyMaterial k0 = key_update(f.keys, f.params, false, rng);
    EXPECT_EQ(k0.u, f.keys.u);
}

TEST(Protocol, NoiselessPmDelivers) {
    Fixture f(5);
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng = Rng::substream(5, i);
        const KeyMaterial k = key_update(f.keys, f.params, true, rng);
        const Bits m = random_tagged_message(k, f.params, rng);
        const auto t = run_pm_protocol(f.params, k, m, ChannelModel::independent(0, 0), rng);
        ASSERT_TRUE(t.omega);
        ASSERT_TRUE(t.m_hat.has_value());
        EXPECT_EQ(*t.m_hat, m);
        EXPECT_TRUE(t.decode_success);
        EXPECT_EQ(t.payload_flips, 0u);
        EXPECT_FALSE(t.mac_failure);
    }
}

TEST(Protocol, NoiselessEprDelivers) {
    Fixture f(6);
    const auto source = attack::solve_check_b({0, 0});
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng = Rng::substream(6, i);
        const auto t = run_epr_protocol(f.params, f.keys, f.m, source, rng);
        ASSERT_TRUE(t.omega);
        ASSERT_TRUE(t.m_hat.has_value());
        EXPECT_EQ(*t.m_hat, f.m);
        const auto& s = secrets(t);
        for (std::size_t p = 0; p < f.params.n; ++p) EXPECT_EQ(s.x[p] ^ s.y[p] ^ (s.a[p] & s.b[p]), s.t[p]);
    }
}

TEST(Protocol, PmSecretsAreConsistent) {
    Fixture f(7);
    Rng rng(8);
    const auto t = run_pm_protocol(f.params, f.keys, f.m, ChannelModel::independent(0.02, 0.02), rng);
    const auto& s = secrets(t);
    EXPECT_EQ(xor_bits(s.z, s.t), s.c);
    EXPECT_EQ(f.params.code.syn(s.z), s.s);
    EXPECT_EQ(hash_phi(f.keys.u, s.z, f.params.ell), f.m);
    EXPECT_EQ(weight(xor_bits(s.z_prime, s.z)), t.payload_flips);
    if (t.mu) {
        EXPECT_EQ(xor_bits(t.mu->masked_syndrome, f.keys.k_syn), s.s);
        EXPECT_TRUE(t.mu_authenticated);
    }
}

TEST(Protocol, BottomImpliesReject) {
    // Channel 1 at 3 beta*: Alice must refuse almost always.
    ProtocolParams p;
    p.delta = 0.1;
    Fixture f(9, p);
    int bottom = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng = Rng::substream(9, i);
        const auto t = run_pm_protocol(f.params, f.keys, f.m, ChannelModel::independent(3 * p.beta_star, 0), rng);
        if (!t.mu) {
            ++bottom;
            EXPECT_FALSE(t.omega);
        }
        if (!t.omega) EXPECT_FALSE(t.m_hat.has_value());
    }
    EXPECT_GE(bottom, 190);
}

TEST(Protocol, DecodeSuccessMatchesExactDecodeProbability) {
    // Empirical z_hat == z rate against the coset-leader success probability.
    for (const bool strong : {false, true}) {
        ProtocolParams p;
        if (strong) p.code = strong_code();
        Fixture f(10, p);
        const int trials = 1000;
        int ok = 0;
        for (int i = 0; i < trials; ++i) {
            Rng rng = Rng::substream(10, static_cast<std::uint64_t>(i), strong);
            ok += run_pm_protocol(f.params, f.keys, f.m, ChannelModel::independent(0.02, 0.02), rng).decode_success;
        }
        const double q = p.code.exact_decode_probability(flip_star(0.02, 0.02));
        const double sigma = std::sqrt(q * (1 - q) / trials);
        EXPECT_NEAR(ok / double(trials), q, 4 * sigma + 1e-9) << "strong=" << strong;
        if (strong) EXPECT_GE(ok / double(trials), 0.9);
    }
}

TEST(Protocol, DecodeIdentityAndMacAnomaly) {
    // Loose thresholds so noisy runs get accepted.
    ProtocolParams p;
    p.beta_star = 0.3;
    p.gamma_star = 0.3;
    p.delta = 5.0;
    Fixture f(11, p);
    int anomalies = 0, accepted = 0;
    for (std::uint64_t i = 0; i < 300; ++i) {
        Rng rng = Rng::substream(11, i);
        const auto t = run_pm_protocol(f.params, f.keys, f.m, ChannelModel::independent(0.04, 0.04), rng);
        if (!t.omega) continue;
        ++accepted;
        const auto& s = secrets(t);
        const Bits e = xor_bits(s.z_prime, s.z);
        bool within_radius = true;
        for (std::size_t blk = 0; blk < 8; ++blk)
            within_radius = within_radius && weight(std::span<const std::uint8_t>(e).subspan(7 * blk, 7)) <= 1;
        if (within_radius) {
            ASSERT_TRUE(t.m_hat.has_value());
            EXPECT_EQ(*t.m_hat, f.m);
        }
        EXPECT_EQ(t.decode_success, within_radius);
        if (!t.decode_success) {
            EXPECT_TRUE(t.mac_failure);
            EXPECT_FALSE(t.m_hat.has_value());
            ++anomalies;
        }
    }
    EXPECT_GT(accepted, 250);
    EXPECT_GT(anomalies, 10);
}

TEST(Protocol, EprFlipRateIsStar) {
    Fixture f(12);
    for (const auto& [b, g] : {std::pair{0.03, 0.03}, std::pair{0.05, 0.01}}) {
        const auto source = attack::solve_check_b({b, g});
        std::size_t flips = 0, total = 0;
        for (std::uint64_t i = 0; total < 10000; ++i) {
            Rng rng = Rng::substream(12, i);
            const auto t = run_epr_protocol(f.params, f.keys, f.m, source, rng);
            const auto& s = secrets(t);
            std::size_t here = 0;
            for (std::size_t p = 0; p < f.params.n; ++p) here += s.x[p] ^ s.y[p] ^ (s.a[p] & s.b[p]) ^ s.t[p];
            EXPECT_EQ(here, t.payload_flips);
            flips += here;
            total += f.params.n;
        }
        const double q = flip_star(b, g);
        EXPECT_NEAR(flips / double(total), q, 3 * std::sqrt(q * (1 - q) / total));
    }
}

TEST(Protocol, EprMarginalIsUniform) {
    Fixture f(13);
    const auto source = attack::solve_check_b({0.04, 0.02});
    std::array<std::array<std::size_t, 8>, 2> counts{};
    for (std::uint64_t i = 0; i < 300; ++i) {
        Rng rng = Rng::substream(13, i);
        const auto t = run_epr_protocol(f.params, f.keys, f.m, source, rng);
        const auto& s = secrets(t);
        for (std::size_t p = 0; p < f.params.n; ++p) ++counts[s.b[p]][s.x[p] * 4 + s.a[p] * 2 + s.t[p]];
    }
    for (const auto& c : counts) EXPECT_GT(chi_square_uniform(c).p_value, 0.01);
}

TEST(Protocol, EprOutcomesFollowAttackDistribution) {
    // Joint (x, y, a, t) frequencies for a generic source against P_{xyat|b}.
    std::array<double, 16> lam{};
    Rng lr(99);
    double sum = 0;
    for (auto& v : lam) sum += (v = lr.uniform01());
    for (auto& v : lam) v /= sum;
    const attack::BellDiagonalState source(lam);
    Fixture f(14);
    std::array<std::array<std::size_t, 16>, 2> counts{};
    std::array<std::size_t, 2> totals{};
    for (std::uint64_t i = 0; i < 400; ++i) {
        Rng rng = Rng::substream(14, i);
        const auto t = run_epr_protocol(f.params, f.keys, f.m, source, rng);
        const auto& s = secrets(t);
        for (std::size_t p = 0; p < f.params.n; ++p) {
            ++counts[s.b[p]][s.x[p] * 8 + s.y[p] * 4 + s.a[p] * 2 + s.t[p]];
            ++totals[s.b[p]];
        }
    }
    for (int b = 0; b < 2; ++b)
        for (int k = 0; k < 16; ++k) {
            const double q = attack::outcome_probability(source, b, k >> 3, (k >> 2) & 1, (k >> 1) & 1, k & 1);
            const double n = static_cast<double>(totals[b]);
            EXPECT_NEAR(counts[b][k] / n, q, 4 * std::sqrt(q * (1 - q) / n) + 1e-12);
        }
}

TEST(Protocol, EprTestErrorsMatchSource) {
    Fixture f(15);
    const auto source = attack::solve_check_b({0.05, 0.03});
    double d1 = 0, d2 = 0, joint = 0, total = 0;
    for (std::uint64_t i = 0; i < 40; ++i) {
        Rng rng = Rng::substream(15, i);
        const auto v = run_epr_protocol(f.params, f.keys, f.m, source, rng).monitor;
        d1 += static_cast<double>(v.delta1[0] + v.delta1[1] + v.delta1[2]);
        d2 += static_cast<double>(v.delta2[0] + v.delta2[1] + v.delta2[2]);
        for (const auto& row : v.joint)
            for (auto c : row) joint += static_cast<double>(c);
        total += static_cast<double>(f.params.test_count);
    }
    EXPECT_NEAR(d1 / total, 0.05, 3 * std::sqrt(0.05 * 0.95 / total));
    EXPECT_NEAR(d2 / total, 0.03, 3 * std::sqrt(0.03 * 0.97 / total));
    EXPECT_NEAR(joint / total, 0.0015, 3 * std::sqrt(0.0015 / total));
}

TEST(Protocol, InterceptResendIsCaught) {
    Fixture f(16);
    double flips = 0, total = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        Rng rng = Rng::substream(16, i);
        const auto t = run_pm_protocol(f.params, f.keys, f.m, ChannelModel::intercept_resend(), rng);
        EXPECT_FALSE(t.mu.has_value());
        EXPECT_FALSE(t.omega);
        EXPECT_EQ(t.monitor.delta2[0] + t.monitor.delta2[1] + t.monitor.delta2[2], 0u);
        flips += static_cast<double>(t.monitor.delta1[0] + t.monitor.delta1[1] + t.monitor.delta1[2]);
        total += static_cast<double>(f.params.test_count);
    }
    // Wrong basis with probability 2/3, then a coin flip.
    EXPECT_NEAR(flips / total, 1.0 / 3.0, 3 * std::sqrt(2.0 / 9.0 / total));
}

TEST(Protocol, BellDiagonalChannelMatchesIndependentRates) {
    // A product Bell-diagonal channel gives the same flip statistics as independent flips.
    Fixture f(17);
    const auto ch = ChannelModel::bell_diagonal(attack::solve_check_b({0.04, 0.02}));
    double d1 = 0, d2 = 0, pf = 0, total = 0, ptotal = 0;
    for (std::uint64_t i = 0; i < 40; ++i) {
        Rng rng = Rng::substream(17, i);
        const auto t = run_pm_protocol(f.params, f.keys, f.m, ch, rng);
        d1 += static_cast<double>(t.monitor.delta1[0] + t.monitor.delta1[1] + t.monitor.delta1[2]);
        d2 += static_cast<double>(t.monitor.delta2[0] + t.monitor.delta2[1] + t.monitor.delta2[2]);
        pf += static_cast<double>(t.payload_flips);
        total += static_cast<double>(f.params.test_count);
        ptotal += static_cast<double>(f.params.n);
    }
    EXPECT_NEAR(d1 / total, 0.04, 3 * std::sqrt(0.04 * 0.96 / total));
    EXPECT_NEAR(d2 / total, 0.02, 3 * std::sqrt(0.02 * 0.98 / total));
    const double q = flip_star(0.04, 0.02);
    EXPECT_NEAR(pf / ptotal, q, 3 * std::sqrt(q * (1 - q) / ptotal));
}

TEST(Protocol, PermutationInvariance) {
    // Moving I_test to the other end of the position range changes nothing
    // statistically.
    ProtocolParams p;
    p.beta_star = 0.06;
    p.gamma_star = 0.06;
    Fixture f(18, p);
    KeyMaterial moved = f.keys;
    std::iota(moved.i_test.begin(), moved.i_test.end(), p.n);
    const auto ch = ChannelModel::independent(0.04, 0.04);
    double acc_a = 0, acc_b = 0;
    const int trials = 300;
    for (int i = 0; i < trials; ++i) {
        Rng r1 = Rng::substream(18, static_cast<std::uint64_t>(i), 1);
        Rng r2 = Rng::substream(18, static_cast<std::uint64_t>(i), 2);
        acc_a += run_pm_protocol(f.params, f.keys, f.m, ch, r1).monitor.check_a;
        acc_b += run_pm_protocol(f.params, moved, f.m, ch, r2).monitor.check_a;
    }
    const double pa = acc_a / trials, pb = acc_b / trials, pool = (pa + pb) / 2;
    EXPECT_LE(std::abs(pa - pb), 3 * std::sqrt(pool * (1 - pool) * 2.0 / trials) + 1e-12);
}

TEST(Protocol, ChiSquareUniform) {
    const std::array<std::size_t, 4> flat{25, 25, 25, 25};
    EXPECT_DOUBLE_EQ(chi_square_uniform(flat).statistic, 0.0);
    EXPECT_NEAR(chi_square_uniform(flat).p_value, 1.0, 1e-12);
    // Two categories, statistic 4: p = erfc(sqrt(2)) for one degree of freedom.
    const std::array<std::size_t, 2> skew{60, 40};
    const auto r = chi_square_uniform(skew);
    EXPECT_DOUBLE_EQ(r.statistic, 4.0);
    EXPECT_EQ(r.dof, 1);
    EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(2.0)), 1e-12);
    EXPECT_THROW(chi_square_uniform(std::array<std::size_t, 1>{3}), ConfigError);
}

TEST(Equivalence, NoiselessIsIdentical) {
    Fixture f(19);
    const auto rep = equivalence_check(f.params, f.keys, f.m, {0, 0}, 30, 19);
    EXPECT_TRUE(rep.passed);
    for (const auto& c : rep.comparisons) EXPECT_EQ(c.pm, c.epr) << c.name;
}

TEST(Equivalence, ModerateNoiseAgrees) {
    Fixture f(20);
    const auto rep = equivalence_check(f.params, f.keys, f.m, {0.03, 0.03}, 500, 20);
    for (const auto& c : rep.comparisons) EXPECT_TRUE(c.passed) << c.name << " z=" << c.z;
    EXPECT_TRUE(rep.passed);
}

TEST(Equivalence, HighNoiseBothReject) {
    Fixture f(21);
    const auto rep = equivalence_check(f.params, f.keys, f.m, {0.2, 0.2}, 100, 21);
    for (const auto& c : rep.comparisons)
        if (c.name == "accept_rate") {
            EXPECT_LE(c.pm, 0.05);
            EXPECT_LE(c.epr, 0.05);
        }
}

TEST(ProtocolIo, ConfigRoundTripAndErrors) {
    const auto doc = nlohmann::json::parse(R"({"variant":"epr","params":{"n":56,"test_count":900},
        "code":{"family":"random_systematic","blocks":4,"block_n":14,"block_k":4,"seed":3},
        "channel":{"mode":"independent_flip","beta":0.03,"gamma":0.02},"trials":7,"seed":9})");
    const auto cfg = config_from_json(doc);
    EXPECT_EQ(cfg.variant, Variant::epr);
    EXPECT_EQ(cfg.params.code.dimension(), 16u);
    EXPECT_DOUBLE_EQ(cfg.params.delta, 0.3);
    const auto again = config_from_json(config_to_json(cfg));
    EXPECT_EQ(config_to_json(again), config_to_json(cfg));
    EXPECT_EQ(again.params.code.parity_check(), cfg.params.code.parity_check());

    for (const char* bad : {R"({"bogus":1})", R"({"variant":"xyz"})", R"({"params":{"ell":99}})",
                            R"({"params":{"n":"56"}})", R"({"code":{"family":"hamming74","blocks":7}})",
                            R"({"variant":"epr","channel":{"mode":"intercept_resend"}})",
                            R"({"channel":{"mode":"bell_diagonal","lambda":[1,0]}})", R"({"trials":0})",
                            R"({"schema":"vsue-config/0"})"})
        EXPECT_THROW(config_from_json(nlohmann::json::parse(bad)), ConfigError) << bad;
}

TEST(ProtocolIo, TranscriptOmitsSecrets) {
    Fixture f(22);
    Rng rng(23);
    const auto t = run_pm_protocol(f.params, f.keys, f.m, ChannelModel::independent(0.01, 0.01), rng);
    const auto j = transcript_to_json(t, 0);
    for (const char* secret : {"t", "r", "z", "s", "y", "x", "b", "w"}) EXPECT_FALSE(j.contains(secret));
    EXPECT_TRUE(j.contains("mu"));
    EXPECT_TRUE(j.contains("diagnostics"));
    if (t.mu) EXPECT_FALSE(j["mu"].contains("a"));
}

TEST(ProtocolIo, Determinism) {
    Fixture f(24);
    auto run = [&] {
        Rng rng(25, 3);
        return transcript_to_json(run_epr_protocol(f.params, f.keys, f.m, attack::solve_check_b({0.02, 0.02}), rng), 0)
            .dump();
    };
    EXPECT_EQ(run(), run());
}
