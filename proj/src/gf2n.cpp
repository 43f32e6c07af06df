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
#include <array>
#include <string>

#include "vsue/classical.hpp"
#include "vsue/errors.hpp"

namespace vsue::classical {
namespace {

// Index nu - 1 holds the low part of the smallest irreducible degree-nu
// polynomial (tests re-derive every entry with a Rabin irreducibility check).
constexpr std::array<std::uint64_t, kMaxFieldBits> kReductionLow = {
    0x0ull,  // 1
    0x3ull,  // 2
    0x3ull,  // 3
    0x3ull,  // 4
    0x5ull,  // 5
    0x3ull,  // 6
    0x3ull,  // 7
    0x1Bull,  // 8
    0x3ull,  // 9
    0x9ull,  // 10
    0x5ull,  // 11
    0x9ull,  // 12
    0x1Bull,  // 13
    0x21ull,  // 14
    0x3ull,  // 15
    0x2Bull,  // 16
    0x9ull,  // 17
    0x9ull,  // 18
    0x27ull,  // 19
    0x9ull,  // 20
    0x5ull,  // 21
    0x3ull,  // 22
    0x21ull,  // 23
    0x1Bull,  // 24
    0x9ull,  // 25
    0x1Bull,  // 26
    0x27ull,  // 27
    0x3ull,  // 28
    0x5ull,  // 29
    0x3ull,  // 30
    0x9ull,  // 31
    0x8Dull,  // 32
    0x4Bull,  // 33
    0x1Bull,  // 34
    0x5ull,  // 35
    0x35ull,  // 36
    0x3Full,  // 37
    0x63ull,  // 38
    0x11ull,  // 39
    0x39ull,  // 40
    0x9ull,  // 41
    0x27ull,  // 42
    0x59ull,  // 43
    0x21ull,  // 44
    0x1Bull,  // 45
    0x3ull,  // 46
    0x21ull,  // 47
    0x2Dull,  // 48
    0x71ull,  // 49
    0x1Dull,  // 50
    0x4Bull,  // 51
    0x9ull,  // 52
    0x47ull,  // 53
    0x7Dull,  // 54
    0x47ull,  // 55
    0x95ull,  // 56
    0x11ull,  // 57
    0x63ull,  // 58
    0x7Bull,  // 59
    0x3ull,  // 60
    0x27ull,  // 61
    0x69ull,  // 62
    0x3ull,  // 63
    0x1Bull,  // 64
};

std::uint64_t field_mask(unsigned bits) {
    return bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

void check_field(unsigned bits) {
    if (bits == 0 || bits > kMaxFieldBits) {
        throw DomainError("GF(2^nu): nu must be in 1..64, got " + std::to_string(bits));
    }
}

}  // namespace

std::uint64_t reduction_polynomial(unsigned field_bits) {
    check_field(field_bits);
    return kReductionLow[field_bits - 1];
}

GFElement gf_element(unsigned field_bits, std::uint64_t value) {
    check_field(field_bits);
    if ((value & ~field_mask(field_bits)) != 0) {
        throw DomainError("GF(2^nu): value has more than nu bits");
    }
    return {field_bits, value};
}

GFElement gf_from_bits(std::span<const std::uint8_t> bits) {
    return gf_element(static_cast<unsigned>(bits.size()), to_uint(bits));
}

Bits gf_to_bits(const GFElement& x) {
    return from_uint(x.value, x.field_bits);
}

GFElement gf_add(const GFElement& x, const GFElement& y) {
    if (x.field_bits != y.field_bits) {
        throw DomainError("gf_add: field mismatch");
    }
    return {x.field_bits, x.value ^ y.value};
}

GFElement gf_mul(const GFElement& x, const GFElement& y) {
    if (x.field_bits != y.field_bits) {
        throw DomainError("gf_mul: field mismatch");
    }
    const unsigned nu = x.field_bits;
    const std::uint64_t mask = field_mask(nu);
    const std::uint64_t top = std::uint64_t{1} << (nu - 1);
    const std::uint64_t low = kReductionLow[nu - 1];
    std::uint64_t a = x.value;
    std::uint64_t b = y.value;
    std::uint64_t r = 0;
    for (unsigned i = 0; i < nu && b != 0; ++i, b >>= 1) {
        if (b & 1u) {
            r ^= a;
        }
        const bool carry = (a & top) != 0;
        a = (a << 1) & mask;
        if (carry) {
            a ^= low;
        }
    }
    return {nu, r};
}

GFElement gf_pow(const GFElement& x, std::uint64_t exponent) {
    GFElement result{x.field_bits, 1};
    GFElement base = x;
    while (exponent != 0) {
        if (exponent & 1u) {
            result = gf_mul(result, base);
        }
        base = gf_mul(base, base);
        exponent >>= 1;
    }
    return result;
}

GFElement gf_inv(const GFElement& x) {
    if (x.value == 0) {
        throw DomainError("gf_inv: zero has no inverse");
    }
    // x^(2^nu - 2), written as x^(2 + 4 + ... + 2^(nu-1)) to avoid 2^64 overflow.
    GFElement result{x.field_bits, 1};
    GFElement sq = x;
    for (unsigned i = 1; i < x.field_bits; ++i) {
        sq = gf_mul(sq, sq);
        result = gf_mul(result, sq);
    }
    return result;
}

}  // namespace vsue::classical
