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
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "vsue/classical.hpp"
#include "vsue/errors.hpp"

namespace vsue::classical {

namespace {

// Rank of a set of GF(2) rows packed into 64-bit words.
std::size_t gf2_rank(std::vector<std::uint64_t> rows) {
    std::size_t rank = 0;
    for (int bit = 63; bit >= 0 && rank < rows.size(); --bit) {
        const std::uint64_t m = std::uint64_t{1} << bit;
        auto pivot = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(rank), rows.end(),
                                  [m](std::uint64_t r) { return (r & m) != 0; });
        if (pivot == rows.end()) {
            continue;
        }
        std::swap(*pivot, rows[rank]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != rank && (rows[i] & m)) {
                rows[i] ^= rows[rank];
            }
        }
        ++rank;
    }
    return rank;
}

// Basis of {e : H e = 0}, each vector with bit i = position i.
std::vector<std::uint64_t> kernel_basis(const std::vector<std::uint64_t>& columns) {
    std::array<std::uint64_t, 64> basis_syn{};
    std::array<std::uint64_t, 64> basis_combo{};
    std::vector<std::uint64_t> kernel;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        std::uint64_t s = columns[i];
        std::uint64_t combo = std::uint64_t{1} << i;
        while (s != 0) {
            const int top = 63 - std::countl_zero(s);
            if (basis_syn[top] == 0) {
                basis_syn[top] = s;
                basis_combo[top] = combo;
                break;
            }
            s ^= basis_syn[top];
            combo ^= basis_combo[top];
        }
        if (s == 0) {
            kernel.push_back(combo);
        }
    }
    return kernel;
}

// Smallest w such that some w distinct columns XOR to zero; searched by
// increasing subset size.
std::size_t min_distance_by_subsets(const std::vector<std::uint64_t>& columns, std::size_t limit) {
    const std::size_t n = columns.size();
    for (std::size_t w = 1; w <= limit; ++w) {
        std::vector<std::size_t> idx(w);
        for (std::size_t i = 0; i < w; ++i) {
            idx[i] = i;
        }
        while (true) {
            std::uint64_t s = 0;
            for (std::size_t i : idx) {
                s ^= columns[i];
            }
            if (s == 0) {
                return w;
            }
            std::size_t pos = w;
            while (pos > 0 && idx[pos - 1] == n - w + pos - 1) {
                --pos;
            }
            if (pos == 0) {
                break;
            }
            ++idx[pos - 1];
            for (std::size_t i = pos; i < w; ++i) {
                idx[i] = idx[i - 1] + 1;
            }
        }
    }
    return limit + 1;
}

}  // namespace

LinearCode::Block LinearCode::build_block(std::span<const Bits> rows) {
    if (rows.empty()) {
        throw ConfigError("parity-check matrix has no rows");
    }
    const std::size_t n = rows.front().size();
    const std::size_t r = rows.size();
    if (n == 0 || n > kMaxBlockLength) {
        throw SizeError("parity-check block length must be in 1.." + std::to_string(kMaxBlockLength));
    }
    if (r > kMaxBlockSyndromeBits) {
        throw SizeError("parity-check block has more than " +
                        std::to_string(kMaxBlockSyndromeBits) + " rows");
    }
    if (r >= n) {
        throw ConfigError("parity-check matrix must have fewer rows than columns");
    }
    std::vector<std::uint64_t> packed;
    for (const Bits& row : rows) {
        if (row.size() != n) {
            throw ShapeError("parity-check rows have unequal lengths");
        }
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (row[i] > 1) {
                throw ConfigError("parity-check entries must be 0 or 1");
            }
            v |= static_cast<std::uint64_t>(row[i]) << i;
        }
        packed.push_back(v);
    }
    if (gf2_rank(packed) != r) {
        throw ConfigError("parity-check matrix is not full rank");
    }

    Block block;
    block.n = n;
    block.r = r;
    block.columns.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            block.columns[i] |= static_cast<std::uint64_t>(rows[j][i]) << (r - 1 - j);
        }
    }

    // Breadth-first search over syndromes: the first error reaching a
    // syndrome has minimum weight.
    const std::size_t cosets = std::size_t{1} << r;
    constexpr std::uint64_t kUnset = std::numeric_limits<std::uint64_t>::max();
    block.leaders.assign(cosets, kUnset);
    block.leaders[0] = 0;
    std::vector<std::uint64_t> frontier{0};
    std::size_t filled = 1;
    while (!frontier.empty() && filled < cosets) {
        std::vector<std::uint64_t> next;
        for (std::uint64_t s : frontier) {
            const std::uint64_t e = block.leaders[s];
            for (std::size_t i = 0; i < n; ++i) {
                if (e & (std::uint64_t{1} << i)) {
                    continue;
                }
                const std::uint64_t t = s ^ block.columns[i];
                if (block.leaders[t] == kUnset) {
                    block.leaders[t] = e | (std::uint64_t{1} << i);
                    next.push_back(t);
                    ++filled;
                }
            }
        }
        frontier = std::move(next);
    }

    const std::vector<std::uint64_t> kernel = kernel_basis(block.columns);
    if (kernel.size() <= 24) {
        std::size_t best = n + 1;
        std::uint64_t word = 0;
        const std::uint64_t total = std::uint64_t{1} << kernel.size();
        for (std::uint64_t g = 1; g < total; ++g) {
            word ^= kernel[static_cast<std::size_t>(std::countr_zero(g))];
            best = std::min<std::size_t>(best, static_cast<std::size_t>(std::popcount(word)));
        }
        block.min_distance = best;
    } else {
        block.min_distance = min_distance_by_subsets(block.columns, r + 1);
    }
    return block;
}

LinearCode LinearCode::from_parity_check(std::span<const Bits> rows) {
    LinearCode code;
    code.blocks_.push_back(build_block(rows));
    code.n_ = code.blocks_.front().n;
    code.r_ = code.blocks_.front().r;
    return code;
}

LinearCode LinearCode::hamming74() {
    const std::vector<Bits> rows = {
        {0, 0, 0, 1, 1, 1, 1},
        {0, 1, 1, 0, 0, 1, 1},
        {1, 0, 1, 0, 1, 0, 1},
    };
    return from_parity_check(rows);
}

LinearCode LinearCode::random_systematic(std::size_t n, std::size_t k, Rng& rng) {
    if (k == 0 || k >= n) {
        throw ConfigError("random_systematic: need 0 < k < n");
    }
    const std::size_t r = n - k;
    std::vector<Bits> rows(r, Bits(n, 0));
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t i = 0; i < k; ++i) {
            rows[j][i] = rng.bit();
        }
        rows[j][k + j] = 1;
    }
    return from_parity_check(rows);
}

LinearCode LinearCode::direct_sum(std::span<const LinearCode> parts) {
    if (parts.empty()) {
        throw ConfigError("direct_sum: no parts");
    }
    LinearCode code;
    for (const LinearCode& p : parts) {
        code.blocks_.insert(code.blocks_.end(), p.blocks_.begin(), p.blocks_.end());
        code.n_ += p.n_;
        code.r_ += p.r_;
    }
    return code;
}

LinearCode LinearCode::repeated(const LinearCode& block, std::size_t copies) {
    if (copies == 0) {
        throw ConfigError("repeated: copies must be positive");
    }
    const std::vector<LinearCode> parts(copies, block);
    return direct_sum(parts);
}

LinearCode LinearCode::parse_matrix(std::string_view text) {
    std::vector<Bits> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::string compact;
        for (char ch : line) {
            if (ch == ' ' || ch == '\t' || ch == '\r') {
                continue;
            }
            compact.push_back(ch);
        }
        if (compact.empty() || compact.front() == '#') {
            continue;
        }
        rows.push_back(parse_bits(compact));
    }
    return from_parity_check(rows);
}

LinearCode LinearCode::load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open parity-check file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_matrix(buffer.str());
}

std::vector<Bits> LinearCode::parity_check() const {
    std::vector<Bits> rows;
    std::size_t offset = 0;
    for (const Block& b : blocks_) {
        for (std::size_t j = 0; j < b.r; ++j) {
            Bits row(n_, 0);
            for (std::size_t i = 0; i < b.n; ++i) {
                row[offset + i] = static_cast<std::uint8_t>((b.columns[i] >> (b.r - 1 - j)) & 1);
            }
            rows.push_back(std::move(row));
        }
        offset += b.n;
    }
    return rows;
}

Bits LinearCode::syn(std::span<const std::uint8_t> word) const {
    if (word.size() != n_) {
        throw ShapeError("syn: word length " + std::to_string(word.size()) + " != n = " +
                         std::to_string(n_));
    }
    Bits out;
    out.reserve(r_);
    std::size_t offset = 0;
    for (const Block& b : blocks_) {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < b.n; ++i) {
            if (word[offset + i] & 1) {
                s ^= b.columns[i];
            }
        }
        const Bits part = from_uint(s, b.r);
        out.insert(out.end(), part.begin(), part.end());
        offset += b.n;
    }
    return out;
}

Bits LinearCode::syn_dec(std::span<const std::uint8_t> syndrome) const {
    if (syndrome.size() != r_) {
        throw ShapeError("syn_dec: syndrome length " + std::to_string(syndrome.size()) +
                         " != " + std::to_string(r_));
    }
    Bits out;
    out.reserve(n_);
    std::size_t offset = 0;
    for (const Block& b : blocks_) {
        const std::uint64_t s = to_uint(syndrome.subspan(offset, b.r));
        const std::uint64_t e = b.leaders[static_cast<std::size_t>(s)];
        for (std::size_t i = 0; i < b.n; ++i) {
            out.push_back(static_cast<std::uint8_t>((e >> i) & 1));
        }
        offset += b.r;
    }
    return out;
}

Bits LinearCode::correct(std::span<const std::uint8_t> noisy,
                         std::span<const std::uint8_t> syndrome) const {
    const Bits diff = xor_bits(syndrome, syn(noisy));
    return xor_bits(noisy, syn_dec(diff));
}

std::size_t LinearCode::minimum_distance() const {
    std::size_t d = std::numeric_limits<std::size_t>::max();
    for (const Block& b : blocks_) {
        d = std::min(d, b.min_distance);
    }
    return d;
}

double LinearCode::exact_decode_probability(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("exact_decode_probability: p must lie in [0, 1]");
    }
    double total = 1.0;
    for (const Block& b : blocks_) {
        double block_p = 0.0;
        for (std::uint64_t e : b.leaders) {
            const int w = std::popcount(e);
            block_p += std::pow(p, w) * std::pow(1.0 - p, static_cast<double>(b.n) - w);
        }
        total *= block_p;
    }
    return total;
}

}  // namespace vsue::classical
