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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vsue {

/// Bit string, one 0/1 entry per element. Index 0 is the most significant bit.
using Bits = std::vector<std::uint8_t>;

Bits xor_bits(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
std::size_t weight(std::span<const std::uint8_t> a);
Bits concat(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
Bits slice(std::span<const std::uint8_t> a, std::size_t begin, std::size_t length);

/// Packs up to 64 bits, MSB first, into an integer.
std::uint64_t to_uint(std::span<const std::uint8_t> a);
Bits from_uint(std::uint64_t value, std::size_t length);

std::string to_string(std::span<const std::uint8_t> a);
/// Parses a string of '0'/'1' characters; throws ConfigError on anything else.
Bits parse_bits(std::string_view text);

}  // namespace vsue
