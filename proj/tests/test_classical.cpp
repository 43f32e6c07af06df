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

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "vsue/classical.hpp"
#include "vsue/errors.hpp"

using namespace vsue;
using namespace vsue::classical;

namespace {

using u128 = unsigned __int128;

int degree(u128 p) {
    int d = -1;
    for (int i = 0; i < 128; ++i) {
        if ((p >> i) & 1) d = i;
    }
    return d;
}

u128 poly_mod(u128 a, u128 f) {
    const int df = degree(f);
    for (int d = degree(a); d >= df; d = degree(a)) {
        a ^= f << (d - df);
    }
    return a;
}

u128 poly_mulmod(u128 a, u128 b, u128 f) {
    u128 acc = 0;
    for (int i = 0; i < 64; ++i) {
        if ((b >> i) & 1) acc ^= a << i;
    }
    return poly_mod(acc, f);
}

u128 poly_gcd(u128 a, u128 b) {
    while (b != 0) {
        a = poly_mod(a, b);
        std::swap(a, b);
    }
    return a;
}

// x^(2^k) mod f by repeated squaring.
u128 x_pow_2k(int k, u128 f) {
    u128 r = poly_mod(2, f);
    for (int i = 0; i < k; ++i) r = poly_mulmod(r, r, f);
    return r;
}

bool rabin_irreducible(unsigned n, std::uint64_t low) {
    const u128 f = (u128{1} << n) | low;
    if (x_pow_2k(static_cast<int>(n), f) != poly_mod(2, f)) return false;
    for (unsigned q = 2; q <= n; ++q) {
        bool prime = true;
        for (unsigned d = 2; d * d <= q; ++d) prime = prime && (q % d != 0);
        if (!prime || n % q != 0) continue;
        const u128 g = poly_gcd(f, x_pow_2k(static_cast<int>(n / q), f) ^ 2);
        if (degree(g) != 0) return false;
    }
    return true;
}

// Naive carryless school multiplication followed by reduction, per field.
std::uint64_t naive_mul(unsigned nu, std::uint64_t x, std::uint64_t y, std::uint64_t low) {
    const u128 f = (u128{1} << nu) | low;
    u128 acc = 0;
    for (unsigned i = 0; i < nu; ++i) {
        if ((y >> i) & 1) acc ^= u128{x} << i;
    }
    return static_cast<std::uint64_t>(poly_mod(acc, f));
}

Bits b(std::string_view s) { return parse_bits(s); }

}  // namespace

TEST(GF, ReductionTableIsIrreducibleAndSmallest) {
    EXPECT_EQ(reduction_polynomial(8), 0x1Bu);
    for (unsigned nu = 1; nu <= 64; ++nu) {
        EXPECT_TRUE(rabin_irreducible(nu, reduction_polynomial(nu))) << "nu=" << nu;
    }
    for (unsigned nu = 2; nu <= 16; ++nu) {
        for (std::uint64_t low = 0; low < reduction_polynomial(nu); ++low) {
            EXPECT_FALSE(rabin_irreducible(nu, low)) << "nu=" << nu << " low=" << low;
        }
    }
    EXPECT_THROW(reduction_polynomial(0), DomainError);
    EXPECT_THROW(reduction_polynomial(65), DomainError);
}

TEST(GF, MultiplicationTableNu3) {
    EXPECT_EQ(reduction_polynomial(3), 0x3u);  // x^3 + x + 1
    EXPECT_EQ(gf_mul(gf_element(3, 0b010), gf_element(3, 0b010)).value, 0b100u);
    for (std::uint64_t x = 0; x < 8; ++x) {
        for (std::uint64_t y = 0; y < 8; ++y) {
            EXPECT_EQ(gf_mul(gf_element(3, x), gf_element(3, y)).value, naive_mul(3, x, y, 0x3));
        }
    }
}

TEST(GF, FieldAxiomsExhaustiveSmall) {
    for (unsigned nu = 1; nu <= 4; ++nu) {
        const std::uint64_t size = std::uint64_t{1} << nu;
        for (std::uint64_t x = 0; x < size; ++x) {
            const GFElement ex = gf_element(nu, x);
            EXPECT_EQ(gf_mul(ex, gf_element(nu, 1)), ex);
            if (x != 0) {
                EXPECT_EQ(gf_mul(ex, gf_inv(ex)).value, 1u);
            }
            for (std::uint64_t y = 0; y < size; ++y) {
                const GFElement ey = gf_element(nu, y);
                EXPECT_EQ(gf_mul(ex, ey), gf_mul(ey, ex));
                for (std::uint64_t z = 0; z < size; ++z) {
                    const GFElement ez = gf_element(nu, z);
                    EXPECT_EQ(gf_mul(gf_mul(ex, ey), ez), gf_mul(ex, gf_mul(ey, ez)));
                    EXPECT_EQ(gf_mul(ex, gf_add(ey, ez)), gf_add(gf_mul(ex, ey), gf_mul(ex, ez)));
                }
            }
        }
    }
    EXPECT_THROW(gf_inv(gf_element(4, 0)), DomainError);
    EXPECT_THROW(gf_mul(gf_element(4, 1), gf_element(5, 1)), DomainError);
    EXPECT_THROW(gf_element(3, 8), DomainError);
}

TEST(GF, LargeFieldsAgreeWithNaive) {
    Rng rng(2);
    for (unsigned nu : {8u, 13u, 32u, 61u, 63u, 64u}) {
        const std::uint64_t mask = nu == 64 ? ~0ull : ((1ull << nu) - 1);
        for (int i = 0; i < 200; ++i) {
            const std::uint64_t x = rng.next_u64() & mask;
            const std::uint64_t y = rng.next_u64() & mask;
            EXPECT_EQ(gf_mul(gf_element(nu, x), gf_element(nu, y)).value,
                      naive_mul(nu, x, y, reduction_polynomial(nu)));
            if (x != 0) {
                EXPECT_EQ(gf_mul(gf_element(nu, x), gf_inv(gf_element(nu, x))).value, 1u);
            }
        }
    }
    // Fermat: x^(2^nu - 1) = 1.
    EXPECT_EQ(gf_pow(gf_element(16, 12345), 65535).value, 1u);
}

TEST(Hash, IdentitySeedAndErrors) {
    const HashSeed id = make_seed(gf_element(6, 1), gf_element(6, 0));
    const Bits x = b("101101");
    EXPECT_EQ(hash_phi(id, x, 6), x);
    EXPECT_EQ(hash_phi(id, x, 3), b("101"));
    EXPECT_EQ(hash_inv(id, b("110"), b("001")), b("110001"));
    EXPECT_THROW(hash_phi(id, x, 7), DomainError);
    const HashSeed zero = make_seed(gf_element(6, 0), gf_element(6, 5));
    EXPECT_THROW(hash_inv(zero, b("110"), b("001")), NonInvertibleSeedError);
    EXPECT_THROW(make_seed(gf_element(6, 1), gf_element(5, 0)), DomainError);
}

TEST(Hash, PairwiseIndependenceExhaustive) {
    // nu = 4, ell = 2: over all 256 seeds each (y, y') pair occurs exactly 16 times.
    constexpr unsigned nu = 4;
    constexpr std::size_t ell = 2;
    for (std::uint64_t x = 0; x < 16; ++x) {
        for (std::uint64_t xp = 0; xp < 16; ++xp) {
            if (x == xp) continue;
            std::map<std::pair<std::uint64_t, std::uint64_t>, int> counts;
            int collisions = 0;
            for (std::uint64_t a = 0; a < 16; ++a) {
                for (std::uint64_t bb = 0; bb < 16; ++bb) {
                    const HashSeed u{gf_element(nu, a), gf_element(nu, bb)};
                    const auto y = to_uint(hash_phi(u, from_uint(x, nu), ell));
                    const auto yp = to_uint(hash_phi(u, from_uint(xp, nu), ell));
                    ++counts[{y, yp}];
                    collisions += (y == yp);
                }
            }
            ASSERT_EQ(counts.size(), 16u);
            for (const auto& [key, c] : counts) {
                EXPECT_EQ(c, 16);
            }
            EXPECT_EQ(collisions, 64);  // 2^-ell of 256
        }
    }
}

TEST(Hash, SurjectiveForInvertibleSeeds) {
    for (std::uint64_t a = 1; a < 16; ++a) {
        const HashSeed u{gf_element(4, a), gf_element(4, 7)};
        std::set<std::uint64_t> image;
        for (std::uint64_t x = 0; x < 16; ++x) image.insert(to_uint(hash_phi(u, from_uint(x, 4), 2)));
        EXPECT_EQ(image.size(), 4u);
    }
}

TEST(Hash, InverseRoundTripAndInjective) {
    Rng rng(17);
    for (int s = 0; s < 20; ++s) {
        const HashSeed u = random_invertible_seed(6, rng);
        ASSERT_NE(u.a.value, 0u);
        for (std::uint64_t c = 0; c < 8; ++c) {
            std::set<std::uint64_t> zs;
            for (std::uint64_t r = 0; r < 8; ++r) {
                const Bits z = hash_inv(u, from_uint(c, 3), from_uint(r, 3));
                EXPECT_EQ(hash_phi(u, z, 3), from_uint(c, 3));
                EXPECT_EQ(hash_f(u, z), concat(from_uint(c, 3), from_uint(r, 3)));
                zs.insert(to_uint(z));
            }
            EXPECT_EQ(zs.size(), 8u);
        }
    }
}

TEST(Mac, RoundTripAndLengthSensitivity) {
    Rng rng(4);
    const MacKey key = random_mac_key(32, 16, rng);
    const Bits m = b("1011001110001");
    const Bits tag = mac_tag(key, m);
    EXPECT_EQ(tag.size(), 16u);
    EXPECT_TRUE(mac_verify(key, m, tag));
    Bits flipped = m;
    flipped[3] ^= 1;
    EXPECT_FALSE(mac_verify(key, flipped, tag));
    // Zero-padding ambiguity is removed by the length block.
    Bits padded = m;
    padded.push_back(0);
    EXPECT_NE(mac_tag(key, padded), tag);
    EXPECT_THROW(make_mac_key(key.seed, 33), DomainError);
    EXPECT_THROW(mac_tag(key, Bits(kMaxMacMessageBits + 1, 0)), SizeError);
}

TEST(Mac, ForgeryRateMatchesTagLength) {
    Rng rng(99);
    const Bits m = b("110010101");
    const int trials = 100000;
    int forged = 0;
    int collide = 0;
    for (int i = 0; i < trials; ++i) {
        const MacKey key = random_mac_key(16, 4, rng);
        Bits guess(4);
        for (auto& bit : guess) bit = rng.bit();
        forged += mac_verify(key, m, guess);
        const MacKey other = random_mac_key(16, 4, rng);
        collide += (mac_tag(key, m) == mac_tag(other, m));
    }
    const double p = 1.0 / 16.0;
    const double sigma = std::sqrt(p * (1 - p) / trials);
    EXPECT_NEAR(forged / double(trials), p, 3 * sigma);
    EXPECT_NEAR(collide / double(trials), p, 3 * sigma);
}

TEST(Code, HammingSyndromesAndSingleErrors) {
    const LinearCode h = LinearCode::hamming74();
    EXPECT_EQ(h.n(), 7u);
    EXPECT_EQ(h.dimension(), 4u);
    EXPECT_EQ(h.minimum_distance(), 3u);
    EXPECT_EQ(h.correction_radius(), 1u);
    const auto rows = h.parity_check();
    for (std::size_t i = 0; i < 7; ++i) {
        Bits e(7, 0);
        e[i] = 1;
        const Bits s = h.syn(e);
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(s[j], rows[j][i]);
    }
    EXPECT_EQ(h.syn_dec(Bits(3, 0)), Bits(7, 0));
    // Exhaustive: every word z, syndrome s = Syn z, all weight-1 flips corrected.
    std::size_t codewords = 0;
    for (std::uint64_t zi = 0; zi < 128; ++zi) {
        const Bits z = from_uint(zi, 7);
        const Bits s = h.syn(z);
        codewords += (weight(s) == 0);
        EXPECT_EQ(h.correct(z, s), z);
        for (std::size_t i = 0; i < 7; ++i) {
            Bits zp = z;
            zp[i] ^= 1;
            EXPECT_EQ(h.correct(zp, s), z);
        }
    }
    EXPECT_EQ(codewords, 16u);
    EXPECT_THROW(h.syn(Bits(6, 0)), ShapeError);
    EXPECT_THROW(h.syn_dec(Bits(4, 0)), ShapeError);
}

TEST(Code, LinearityAndCosetLeaders) {
    Rng rng(6);
    const LinearCode code = LinearCode::random_systematic(14, 4, rng);
    EXPECT_EQ(code.syndrome_bits(), 10u);
    // Brute-force minimum weight per syndrome.
    std::vector<int> best(1u << 10, 99);
    for (std::uint64_t e = 0; e < (1u << 14); ++e) {
        const auto s = to_uint(code.syn(from_uint(e, 14)));
        best[s] = std::min(best[s], std::popcount(e));
    }
    std::size_t dmin = 99;
    for (std::uint64_t e = 1; e < (1u << 14); ++e) {
        if (to_uint(code.syn(from_uint(e, 14))) == 0) {
            dmin = std::min<std::size_t>(dmin, std::popcount(e));
        }
    }
    EXPECT_EQ(code.minimum_distance(), dmin);
    for (std::uint64_t s = 0; s < (1u << 10); ++s) {
        const Bits leader = code.syn_dec(from_uint(s, 10));
        EXPECT_EQ(to_uint(code.syn(leader)), s);
        EXPECT_EQ(static_cast<int>(weight(leader)), best[s]);
    }
    for (int i = 0; i < 50; ++i) {
        Bits x(14), y(14);
        for (auto& v : x) v = rng.bit();
        for (auto& v : y) v = rng.bit();
        EXPECT_EQ(code.syn(xor_bits(x, y)), xor_bits(code.syn(x), code.syn(y)));
    }
}

TEST(Code, ExactDecodeProbabilityMatchesMonteCarlo) {
    const LinearCode code = LinearCode::repeated(LinearCode::hamming74(), 3);
    EXPECT_EQ(code.n(), 21u);
    EXPECT_EQ(code.syndrome_bits(), 9u);
    const double p = 0.05;
    const double q = std::pow(1 - p, 7) + 7 * p * std::pow(1 - p, 6);
    EXPECT_NEAR(code.exact_decode_probability(p), q * q * q, 1e-14);
    Rng rng(12);
    int ok = 0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        Bits z(21), zp(21);
        for (auto& v : z) v = rng.bit();
        for (std::size_t i = 0; i < 21; ++i) zp[i] = z[i] ^ (rng.bernoulli(p) ? 1 : 0);
        ok += (code.correct(zp, code.syn(z)) == z);
    }
    const double expect = q * q * q;
    EXPECT_NEAR(ok / double(trials), expect, 4 * std::sqrt(expect * (1 - expect) / trials));
}

TEST(Code, ParseAndLoadMatrix) {
    const LinearCode c = LinearCode::parse_matrix("# hamming\n0001111\n0110011\n\n1010101\n");
    EXPECT_EQ(c.parity_check(), LinearCode::hamming74().parity_check());
    EXPECT_THROW(LinearCode::parse_matrix("0001111\n0001111\n"), ConfigError);
    EXPECT_THROW(LinearCode::parse_matrix("0001111\n011001\n"), ShapeError);
    EXPECT_THROW(LinearCode::parse_matrix("00x1111\n"), ConfigError);
    const auto path = std::filesystem::temp_directory_path() / "vsue_test_matrix.txt";
    {
        std::ofstream out(path);
        out << "1 1 0\n0 1 1\n";
    }
    const LinearCode rep = LinearCode::load_matrix(path);
    EXPECT_EQ(rep.n(), 3u);
    EXPECT_EQ(rep.minimum_distance(), 3u);
    std::filesystem::remove(path);
    EXPECT_THROW(LinearCode::load_matrix("/nonexistent/matrix.txt"), ConfigError);
}
