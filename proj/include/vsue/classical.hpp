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

// Classical building blocks: GF(2^nu) arithmetic, the invertible
// pairwise-independent hash, a one-time Wegman-Carter MAC and binary linear
// codes with coset-leader syndrome decoding.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "vsue/bits.hpp"
#include "vsue/rng.hpp"

namespace vsue::classical {

inline constexpr unsigned kMaxFieldBits = 64;

/// Low part of the reduction polynomial for GF(2^nu): the field is
/// GF(2)[x] / (x^nu + low). Entries are the lexicographically smallest
/// irreducible polynomial of each degree, e.g. nu = 8 gives x^8+x^4+x^3+x+1.
std::uint64_t reduction_polynomial(unsigned field_bits);

struct GFElement {
    unsigned field_bits = 1;
    std::uint64_t value = 0;

    friend bool operator==(const GFElement&, const GFElement&) = default;
};

GFElement gf_element(unsigned field_bits, std::uint64_t value);
GFElement gf_from_bits(std::span<const std::uint8_t> bits);
Bits gf_to_bits(const GFElement& x);

GFElement gf_add(const GFElement& x, const GFElement& y);
/// Carryless product reduced by reduction_polynomial(nu).
GFElement gf_mul(const GFElement& x, const GFElement& y);
GFElement gf_pow(const GFElement& x, std::uint64_t exponent);
/// Multiplicative inverse, x^(2^nu - 2). Throws DomainError for zero.
GFElement gf_inv(const GFElement& x);

/// u = (a, b); F_u(x) = a*x + b.
struct HashSeed {
    GFElement a;
    GFElement b;

    unsigned field_bits() const { return a.field_bits; }
    friend bool operator==(const HashSeed&, const HashSeed&) = default;
};

HashSeed make_seed(GFElement a, GFElement b);
/// Uniform seed with a != 0 (so the seed is invertible).
HashSeed random_invertible_seed(unsigned field_bits, Rng& rng);

/// Full permutation F_u(x) = a*x + b on nu-bit strings.
Bits hash_f(const HashSeed& u, std::span<const std::uint8_t> x);
/// Phi_u(x) = F_u(x)[:ell], the ell most significant bits.
Bits hash_phi(const HashSeed& u, std::span<const std::uint8_t> x, std::size_t ell);
/// F_u^{-1}(c || r). Throws NonInvertibleSeedError if a = 0.
Bits hash_inv(const HashSeed& u, std::span<const std::uint8_t> c, std::span<const std::uint8_t> r);

inline constexpr std::size_t kMaxMacMessageBits = std::size_t{1} << 20;

/// Single-use Wegman-Carter key: polynomial-evaluation hash keyed by a,
/// masked by b, truncated to tag_bits.
struct MacKey {
    HashSeed seed;
    unsigned tag_bits = 0;
};

MacKey make_mac_key(HashSeed seed, unsigned tag_bits);
MacKey random_mac_key(unsigned field_bits, unsigned tag_bits, Rng& rng);

/// The message is cut into nu-bit blocks (last one zero padded) followed by
/// one block holding the message length; the blocks are evaluated by Horner's
/// rule at point a, b is added, and the top tag_bits bits are the tag.
Bits mac_tag(const MacKey& key, std::span<const std::uint8_t> message);
bool mac_verify(const MacKey& key, std::span<const std::uint8_t> message,
                std::span<const std::uint8_t> tag);

/// Binary linear code given by its parity-check matrix, stored as a direct sum
/// of blocks. Each block decodes through a complete coset-leader table, so the
/// syndrome of the whole code is the concatenation of the block syndromes.
class LinearCode {
public:
    static constexpr std::size_t kMaxBlockLength = 64;
    static constexpr std::size_t kMaxBlockSyndromeBits = 24;

    /// Single-block code. Rows must have equal length and full rank.
    static LinearCode from_parity_check(std::span<const Bits> rows);
    static LinearCode hamming74();
    /// H = [P | I] with uniformly random P; always full rank.
    static LinearCode random_systematic(std::size_t n, std::size_t k, Rng& rng);
    static LinearCode direct_sum(std::span<const LinearCode> parts);
    static LinearCode repeated(const LinearCode& block, std::size_t copies);

    /// Plain text: one parity-check row of 0/1 per line; blank lines, spaces
    /// and lines starting with '#' are ignored.
    static LinearCode parse_matrix(std::string_view text);
    static LinearCode load_matrix(const std::filesystem::path& path);

    std::size_t n() const { return n_; }
    std::size_t dimension() const { return n_ - r_; }
    std::size_t syndrome_bits() const { return r_; }
    std::size_t block_count() const { return blocks_.size(); }

    /// Full (block-diagonal) parity-check matrix.
    std::vector<Bits> parity_check() const;

    Bits syn(std::span<const std::uint8_t> word) const;
    /// Coset leader of the syndrome: a minimum-weight error with that syndrome.
    Bits syn_dec(std::span<const std::uint8_t> syndrome) const;
    /// z' xor SynDec(s xor Syn z').
    Bits correct(std::span<const std::uint8_t> noisy, std::span<const std::uint8_t> syndrome) const;

    /// Smallest nonzero codeword weight over all blocks.
    std::size_t minimum_distance() const;
    std::size_t correction_radius() const { return (minimum_distance() - 1) / 2; }
    /// Probability that i.i.d. bit flips with rate p are corrected exactly.
    double exact_decode_probability(double p) const;

private:
    struct Block {
        std::size_t n = 0;
        std::size_t r = 0;
        std::vector<std::uint64_t> columns;  // syndrome of unit vector i, r bits
        std::vector<std::uint64_t> leaders;  // indexed by syndrome, bit i = position i
        std::size_t min_distance = 0;
    };

    static Block build_block(std::span<const Bits> rows);

    std::vector<Block> blocks_;
    std::size_t n_ = 0;
    std::size_t r_ = 0;
};

}  // namespace vsue::classical
