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

#include <array>
#include <cstdint>
#include <limits>

namespace vsue {

/// Philox4x32-10 block function (Salmon et al.). Pure; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based generator. A stream is identified by (seed, stream id); the
/// 64-bit block counter advances inside it. Two generators with the same
/// identity produce the same sequence regardless of what other streams did.
class Rng {
public:
    using result_type = std::uint32_t;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Derives an independent stream for a sub-task (trial index, role tag).
    static Rng substream(std::uint64_t master_seed, std::uint64_t index, std::uint32_t role = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    std::uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();
    bool bernoulli(double p);
    std::uint8_t bit();
    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t uniform_below(std::uint64_t bound);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int next_ = 4;
};

}  // namespace vsue
