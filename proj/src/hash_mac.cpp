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
#include <algorithm>
#include <string>

#include "vsue/classical.hpp"
#include "vsue/errors.hpp"

namespace vsue::classical {

HashSeed make_seed(GFElement a, GFElement b) {
    if (a.field_bits != b.field_bits) {
        throw DomainError("make_seed: a and b belong to different fields");
    }
    return {a, b};
}

HashSeed random_invertible_seed(unsigned field_bits, Rng& rng) {
    const std::uint64_t mask =
        field_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << field_bits) - 1);
    std::uint64_t a = 0;
    while (a == 0) {
        a = rng.next_u64() & mask;
    }
    return {gf_element(field_bits, a), gf_element(field_bits, rng.next_u64() & mask)};
}

Bits hash_f(const HashSeed& u, std::span<const std::uint8_t> x) {
    if (x.size() != u.field_bits()) {
        throw ShapeError("hash_f: input length differs from field size");
    }
    return gf_to_bits(gf_add(gf_mul(u.a, gf_from_bits(x)), u.b));
}

Bits hash_phi(const HashSeed& u, std::span<const std::uint8_t> x, std::size_t ell) {
    if (ell > u.field_bits()) {
        throw DomainError("hash_phi: output length exceeds field size");
    }
    Bits full = hash_f(u, x);
    full.resize(ell);
    return full;
}

Bits hash_inv(const HashSeed& u, std::span<const std::uint8_t> c, std::span<const std::uint8_t> r) {
    if (c.size() + r.size() != u.field_bits()) {
        throw ShapeError("hash_inv: |c| + |r| must equal the field size");
    }
    if (u.a.value == 0) {
        throw NonInvertibleSeedError("hash_inv: seed has a = 0");
    }
    const GFElement w = gf_from_bits(concat(c, r));
    return gf_to_bits(gf_mul(gf_inv(u.a), gf_add(w, u.b)));
}

MacKey make_mac_key(HashSeed seed, unsigned tag_bits) {
    if (tag_bits == 0 || tag_bits > seed.field_bits()) {
        throw DomainError("make_mac_key: tag_bits must be in 1..field_bits");
    }
    return {seed, tag_bits};
}

MacKey random_mac_key(unsigned field_bits, unsigned tag_bits, Rng& rng) {
    const std::uint64_t mask =
        field_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << field_bits) - 1);
    HashSeed seed{gf_element(field_bits, rng.next_u64() & mask),
                  gf_element(field_bits, rng.next_u64() & mask)};
    return make_mac_key(seed, tag_bits);
}

Bits mac_tag(const MacKey& key, std::span<const std::uint8_t> message) {
    if (message.size() > kMaxMacMessageBits) {
        throw SizeError("mac_tag: message exceeds " + std::to_string(kMaxMacMessageBits) + " bits");
    }
    const unsigned nu = key.seed.field_bits();
    GFElement acc{nu, 0};
    for (std::size_t pos = 0; pos < message.size(); pos += nu) {
        Bits block(nu, 0);
        const std::size_t take = std::min<std::size_t>(nu, message.size() - pos);
        std::copy_n(message.begin() + static_cast<std::ptrdiff_t>(pos), take, block.begin());
        acc = gf_mul(gf_add(acc, gf_from_bits(block)), key.seed.a);
    }
    // Length block; for nu < 64 the length is reduced mod 2^nu, which stays
    // injective for messages up to kMaxMacMessageBits when nu >= 21.
    const std::uint64_t mask = nu == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << nu) - 1);
    acc = gf_mul(gf_add(acc, GFElement{nu, message.size() & mask}), key.seed.a);
    Bits tag = gf_to_bits(gf_add(acc, key.seed.b));
    tag.resize(key.tag_bits);
    return tag;
}

bool mac_verify(const MacKey& key, std::span<const std::uint8_t> message,
                std::span<const std::uint8_t> tag) {
    const Bits expected = mac_tag(key, message);
    return tag.size() == expected.size() && std::equal(tag.begin(), tag.end(), expected.begin());
}

}  // namespace vsue::classical
