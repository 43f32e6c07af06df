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
#include "vsue/bits.hpp"

#include "vsue/errors.hpp"

namespace vsue {

Bits xor_bits(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) {
        throw ShapeError("xor_bits: length mismatch");
    }
    Bits out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = static_cast<std::uint8_t>((a[i] ^ b[i]) & 1u);
    }
    return out;
}

std::size_t weight(std::span<const std::uint8_t> a) {
    std::size_t w = 0;
    for (auto v : a) {
        w += v & 1u;
    }
    return w;
}

Bits concat(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    Bits out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Bits slice(std::span<const std::uint8_t> a, std::size_t begin, std::size_t length) {
    if (begin + length > a.size()) {
        throw ShapeError("slice: range exceeds bit string");
    }
    return Bits(a.begin() + static_cast<std::ptrdiff_t>(begin),
                a.begin() + static_cast<std::ptrdiff_t>(begin + length));
}

std::uint64_t to_uint(std::span<const std::uint8_t> a) {
    if (a.size() > 64) {
        throw SizeError("to_uint: more than 64 bits");
    }
    std::uint64_t v = 0;
    for (auto bit : a) {
        v = (v << 1) | (bit & 1u);
    }
    return v;
}

Bits from_uint(std::uint64_t value, std::size_t length) {
    if (length > 64) {
        throw SizeError("from_uint: more than 64 bits");
    }
    Bits out(length);
    for (std::size_t i = 0; i < length; ++i) {
        out[length - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1u);
    }
    return out;
}

std::string to_string(std::span<const std::uint8_t> a) {
    std::string s;
    s.reserve(a.size());
    for (auto v : a) {
        s.push_back(v ? '1' : '0');
    }
    return s;
}

Bits parse_bits(std::string_view text) {
    Bits out;
    out.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw ConfigError("parse_bits: expected only '0' and '1'");
        }
        out.push_back(c == '1' ? 1 : 0);
    }
    return out;
}

}  // namespace vsue
