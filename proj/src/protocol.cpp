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
#include "vsue/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <boost/math/distributions/chi_squared.hpp>

#include "vsue/errors.hpp"

namespace vsue::protocol {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

Bits random_bits(std::size_t count, Rng& rng) {
    Bits out(count);
    for (auto& v : out) v = rng.bit();
    return out;
}

bool is_binary(std::span<const std::uint8_t> bits) {
    return std::all_of(bits.begin(), bits.end(), [](std::uint8_t v) { return v <= 1; });
}

std::vector<std::size_t> random_permutation(std::size_t count, Rng& rng) {
    std::vector<std::size_t> p(count);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = count; i > 1; --i) std::swap(p[i - 1], p[rng.uniform_below(i)]);
    return p;
}

std::vector<std::size_t> random_subset(std::size_t universe, std::size_t count, Rng& rng) {
    std::vector<std::size_t> p(universe);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) std::swap(p[i], p[i + rng.uniform_below(universe - i)]);
    p.resize(count);
    std::sort(p.begin(), p.end());
    return p;
}

// Slot layout: slot_test[j] is the test index of slot j, or npos for payload.
struct Layout {
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::size_t> test_index;
    std::vector<std::size_t> payload_index;
};

Layout make_layout(std::size_t positions, const std::vector<std::size_t>& i_test) {
    Layout l;
    l.test_index.assign(positions, Layout::npos);
    l.payload_index.assign(positions, Layout::npos);
    for (std::size_t k = 0; k < i_test.size(); ++k) l.test_index[i_test[k]] = k;
    std::size_t p = 0;
    for (std::size_t j = 0; j < positions; ++j)
        if (l.test_index[j] == Layout::npos) l.payload_index[j] = p++;
    return l;
}

std::size_t sample_bell_index(const attack::BellDiagonalState& s, Rng& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < 16; ++i) {
        if (s[i] <= 0.0) continue;
        acc += s[i];
        last = i;
        if (u < acc) return i;
    }
    return last;
}

struct BellBits {
    int a1, b1, a2, b2;
};

BellBits split(std::size_t i) {
    return {static_cast<int>((i >> 3) & 1), static_cast<int>((i >> 2) & 1), static_cast<int>((i >> 1) & 1),
            static_cast<int>(i & 1)};
}

// Bit flips the two channels cause at every slot, given the basis used there.
std::pair<Bits, Bits> sample_noise(const ChannelModel& ch, std::span<const std::uint8_t> basis1,
                                   std::span<const std::uint8_t> basis2, Rng& rng) {
    const std::size_t count = basis1.size();
    Bits e1(count), e2(count);
    for (std::size_t j = 0; j < count; ++j) {
        switch (ch.mode) {
            case ChannelMode::independent_flip:
                e1[j] = rng.bernoulli(ch.noise.beta) ? 1 : 0;
                e2[j] = rng.bernoulli(ch.noise.gamma) ? 1 : 0;
                break;
            case ChannelMode::bell_diagonal: {
                const auto q = split(sample_bell_index(ch.state, rng));
                e1[j] = static_cast<std::uint8_t>(attack::basis_error(basis1[j], q.a1, q.b1));
                e2[j] = static_cast<std::uint8_t>(attack::basis_error(basis2[j], q.a2, q.b2));
                break;
            }
            case ChannelMode::intercept_resend: {
                const auto eve = rng.uniform_below(3);
                e1[j] = (eve != basis1[j]) ? rng.bit() : 0;
                e2[j] = 0;
                break;
            }
        }
    }
    return {std::move(e1), std::move(e2)};
}

Bits serialize(const std::optional<ClassicalMessage>& mu) {
    if (!mu) return Bits{0};
    Bits out{1};
    for (const Bits* part : {&mu->masked_xi_prime, &mu->masked_syndrome, &mu->a, &mu->c}) {
        out.insert(out.end(), part->begin(), part->end());
    }
    return out;
}

void check_inputs(const ProtocolParams& params, const KeyMaterial& keys, const Bits& m) {
    params.validate();
    keys.validate(params);
    require(m.size() == params.ell, "message must have ell bits");
    require(is_binary(m), "message bits must be 0 or 1");
}

// Bob's side once omega = 1: decode z' with s and check the message tag.
void finish_bob(RunTranscript& out, VolatileSecrets& sec, const ProtocolParams& params, const KeyMaterial& keys) {
    const Bits m_hat = hash_phi(keys.u, sec.z_hat, params.ell);
    const std::size_t content = params.ell - params.message_tag_bits;
    const auto body = std::span<const std::uint8_t>(m_hat).first(content);
    const auto tag = std::span<const std::uint8_t>(m_hat).subspan(content);
    if (classical::mac_verify(keys.mac_message, body, tag)) {
        out.m_hat = m_hat;
    } else {
        out.mac_failure = true;
    }
}

}  // namespace

void ProtocolParams::validate() const {
    require(n >= 1 && n <= 64, "n must be in 1..64 (it is the hash field size)");
    require(ell >= 1 && ell <= n, "ell must be in 1..n");
    require(message_tag_bits >= 1 && message_tag_bits < ell, "message_tag_bits must be in 1..ell-1");
    require(message_tag_bits <= mac_field_bits, "message_tag_bits exceeds mac_field_bits");
    require(test_count >= 9 && test_count % 9 == 0, "test_count must be a positive multiple of 9");
    require(std::isfinite(beta_star) && beta_star >= 0.0 && beta_star <= 2.0 / 3.0, "beta_star must be in [0, 2/3]");
    require(std::isfinite(gamma_star) && gamma_star >= 0.0 && gamma_star <= 2.0 / 3.0,
            "gamma_star must be in [0, 2/3]");
    require(std::isfinite(delta) && delta >= 0.0, "delta must be non-negative");
    require(mac_field_bits >= 1 && mac_field_bits <= 64, "mac_field_bits must be in 1..64");
    require(channel_tag_bits >= 1 && channel_tag_bits <= mac_field_bits, "channel_tag_bits must be in 1..mac_field_bits");
    require(code.n() == n, "code length must equal n");
    // mu is the longest authenticated string; its length block must not wrap.
    const std::size_t mu_bits = 1 + test_count + code.syndrome_bits() + 2 * n;
    require(mac_field_bits >= 64 || mu_bits < (std::uint64_t{1} << mac_field_bits),
            "mac_field_bits too small for the classical message length");
}

void KeyMaterial::validate(const ProtocolParams& params) const {
    require(u.field_bits() == params.n, "hash seed field must have n bits");
    require(u.a.value != 0, "hash seed must be invertible");
    require(k_syn.size() == params.code.syndrome_bits(), "k_syn length must equal the syndrome length");
    require(k_test.size() == params.test_count, "k_test length must equal test_count");
    require(xi.size() == params.test_count && eta.size() == params.test_count, "xi, eta must have test_count bits");
    require(b_test1.size() == params.test_count && b_test2.size() == params.test_count,
            "test bases must have test_count entries");
    require(i_test.size() == params.test_count, "I_test must have test_count entries");
    require(std::is_sorted(i_test.begin(), i_test.end()) &&
                std::adjacent_find(i_test.begin(), i_test.end()) == i_test.end(),
            "I_test must be strictly increasing");
    require(i_test.empty() || i_test.back() < params.positions(), "I_test entries must be below n + test_count");
    for (const auto& bases : {&b_test1, &b_test2})
        require(std::all_of(bases->begin(), bases->end(), [](std::uint8_t v) { return v <= 2; }),
                "test bases must be 0, 1 or 2");
    require(mac_message.tag_bits == params.message_tag_bits, "message MAC tag length mismatch");
    for (const auto* key : {&mac_message, &mac_alice, &mac_bob})
        require(key->seed.field_bits() == params.mac_field_bits, "MAC key field mismatch");
    require(mac_alice.tag_bits == params.channel_tag_bits && mac_bob.tag_bits == params.channel_tag_bits,
            "channel MAC tag length mismatch");
}

KeyMaterial generate_keys(const ProtocolParams& params, Rng& rng) {
    params.validate();
    KeyMaterial k;
    k.u = classical::random_invertible_seed(static_cast<unsigned>(params.n), rng);
    k.mac_message = classical::random_mac_key(params.mac_field_bits, static_cast<unsigned>(params.message_tag_bits), rng);
    return key_update(k, params, true, rng);
}

KeyMaterial key_update(const KeyMaterial& keys, const ProtocolParams& params, bool /*omega*/, Rng& rng) {
    params.validate();
    KeyMaterial k;
    k.u = keys.u;
    k.k_syn = random_bits(params.code.syndrome_bits(), rng);
    k.k_test = random_bits(params.test_count, rng);
    k.i_test = random_subset(params.positions(), params.test_count, rng);
    std::tie(k.b_test1, k.b_test2) = monitor::balanced_bases(params.test_count, rng);
    k.xi = random_bits(params.test_count, rng);
    k.eta = random_bits(params.test_count, rng);
    k.mac_message = classical::random_mac_key(params.mac_field_bits, static_cast<unsigned>(params.message_tag_bits), rng);
    k.mac_alice = classical::random_mac_key(params.mac_field_bits, params.channel_tag_bits, rng);
    k.mac_bob = classical::random_mac_key(params.mac_field_bits, params.channel_tag_bits, rng);
    return k;
}

Bits tag_message(const KeyMaterial& keys, const ProtocolParams& params, std::span<const std::uint8_t> content) {
    require(content.size() + params.message_tag_bits == params.ell, "message content must have ell - tag bits");
    return concat(content, classical::mac_tag(keys.mac_message, content));
}

Bits random_tagged_message(const KeyMaterial& keys, const ProtocolParams& params, Rng& rng) {
    const Bits content = random_bits(params.ell - params.message_tag_bits, rng);
    return tag_message(keys, params, content);
}

ChannelModel ChannelModel::independent(double beta, double gamma) {
    ChannelModel c;
    c.mode = ChannelMode::independent_flip;
    c.noise = {beta, gamma};
    c.validate();
    return c;
}

ChannelModel ChannelModel::bell_diagonal(const attack::BellDiagonalState& s) {
    ChannelModel c;
    c.mode = ChannelMode::bell_diagonal;
    c.state = s;
    return c;
}

ChannelModel ChannelModel::intercept_resend() {
    ChannelModel c;
    c.mode = ChannelMode::intercept_resend;
    return c;
}

void ChannelModel::validate() const {
    if (mode == ChannelMode::independent_flip) {
        for (double p : {noise.beta, noise.gamma})
            require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "flip probabilities must be in [0, 1]");
    }
}

const VolatileSecrets& TranscriptTestAccess::secrets(const RunTranscript& t) { return t.secrets_; }

RunTranscript run_pm_protocol(const ProtocolParams& params, const KeyMaterial& keys, const Bits& m,
                              const ChannelModel& channel, Rng& rng) {
    check_inputs(params, keys, m);
    channel.validate();
    const std::size_t n = params.n;
    const std::size_t tc = params.test_count;
    const Layout layout = make_layout(params.positions(), keys.i_test);

    RunTranscript out;
    out.variant = Variant::pm;
    VolatileSecrets& sec = out.secrets_;

    // Bob's payload choices, then the qubits of both channels go through Eve.
    sec.x = random_bits(n, rng);
    sec.b = random_bits(n, rng);
    std::vector<std::uint8_t> basis1(params.positions()), basis2(params.positions());
    for (std::size_t j = 0; j < params.positions(); ++j) {
        const std::size_t k = layout.test_index[j];
        basis1[j] = k != Layout::npos ? keys.b_test1[k] : sec.b[layout.payload_index[j]];
        basis2[j] = k != Layout::npos ? keys.b_test2[k] : sec.b[layout.payload_index[j]];
    }
    const auto [e1, e2] = sample_noise(channel, basis1, basis2, rng);

    // Alice flips with t and sends the payload back; she measures the tests.
    sec.t = random_bits(n, rng);
    sec.y.assign(n, 0);
    monitor::TestRecord record;
    record.bases1 = keys.b_test1;
    record.bases2 = keys.b_test2;
    record.xi = keys.xi;
    record.xi_prime.assign(tc, 0);
    record.eta = keys.eta;
    record.eta_prime.assign(tc, 0);
    std::size_t flips = 0;
    for (std::size_t j = 0; j < params.positions(); ++j) {
        const std::size_t k = layout.test_index[j];
        if (k != Layout::npos) {
            record.xi_prime[k] = keys.xi[k] ^ e1[j];
            record.eta_prime[k] = keys.eta[k] ^ e2[j];
        } else {
            const std::size_t p = layout.payload_index[j];
            sec.y[p] = sec.x[p] ^ sec.t[p] ^ e1[j] ^ e2[j];
            flips += e1[j] ^ e2[j];
        }
    }
    out.payload_flips = flips;

    out.monitor = monitor::evaluate(record, params.beta_star, params.gamma_star, params.delta);
    sec.r = random_bits(n - params.ell, rng);
    sec.z = classical::hash_inv(keys.u, m, sec.r);
    sec.c = xor_bits(sec.z, sec.t);
    sec.s = params.code.syn(sec.z);
    if (out.monitor.check_a) {
        ClassicalMessage mu;
        mu.masked_xi_prime = xor_bits(record.xi_prime, keys.k_test);
        mu.masked_syndrome = xor_bits(sec.s, keys.k_syn);
        mu.c = sec.c;
        out.mu = std::move(mu);
    } else {
        out.monitor.check_b = false;
    }
    const Bits mu_bits = serialize(out.mu);
    if (out.mu) out.mu->tag = classical::mac_tag(keys.mac_alice, mu_bits);
    out.mu_authenticated = out.mu ? classical::mac_verify(keys.mac_alice, mu_bits, out.mu->tag)
                                  : true;

    // Bob's reconstruction; the decode diagnostic is computed on every run.
    sec.z_prime = xor_bits(xor_bits(sec.x, sec.y), sec.c);
    sec.z_hat = params.code.correct(sec.z_prime, sec.s);
    out.decode_success = sec.z_hat == sec.z;

    if (out.mu && out.mu_authenticated) {
        // Bob unmasks xi' and the syndrome with his copies of k_test and k_syn.
        const Bits xi_prime = xor_bits(out.mu->masked_xi_prime, keys.k_test);
        const Bits s = xor_bits(out.mu->masked_syndrome, keys.k_syn);
        record.xi_prime = xi_prime;
        out.omega = monitor::evaluate(record, params.beta_star, params.gamma_star, params.delta).check_b;
        if (out.omega) {
            sec.z_hat = params.code.correct(xor_bits(xor_bits(sec.x, sec.y), out.mu->c), s);
            finish_bob(out, sec, params, keys);
        }
    }
    out.omega_tag = classical::mac_tag(keys.mac_bob, Bits{static_cast<std::uint8_t>(out.omega)});
    return out;
}

RunTranscript run_epr_protocol(const ProtocolParams& params, const KeyMaterial& keys, const Bits& m,
                               const attack::BellDiagonalState& source, Rng& rng) {
    check_inputs(params, keys, m);
    const std::size_t n = params.n;
    const std::size_t tc = params.test_count;
    const std::size_t positions = params.positions();

    RunTranscript out;
    out.variant = Variant::epr;
    VolatileSecrets& sec = out.secrets_;

    // The source emits the pairs; the parties permute them and only then pick
    // test positions and bases.
    std::vector<std::size_t> emitted(positions);
    for (auto& i : emitted) i = sample_bell_index(source, rng);
    sec.permutation = random_permutation(positions, rng);
    const auto i_test = random_subset(positions, tc, rng);
    const Layout layout = make_layout(positions, i_test);
    monitor::TestRecord record;
    std::tie(record.bases1, record.bases2) = monitor::balanced_bases(tc, rng);
    record.epr = true;
    record.xi.assign(tc, 0);
    record.xi_prime.assign(tc, 0);
    record.eta.assign(tc, 0);
    record.eta_prime.assign(tc, 0);
    sec.b = random_bits(n, rng);
    sec.x.assign(n, 0);
    sec.y.assign(n, 0);
    sec.t.assign(n, 0);
    sec.a.assign(n, 0);
    sec.w.assign(n, 0);

    for (std::size_t j = 0; j < positions; ++j) {
        const auto q = split(emitted[sec.permutation[j]]);
        const std::size_t k = layout.test_index[j];
        if (k != Layout::npos) {
            // Alice's test outcome is uniform; Bob's differs by the basis error,
            // and y outcomes of |Phi00> come out anticorrelated.
            const int b1 = record.bases1[k];
            const int b2 = record.bases2[k];
            record.xi_prime[k] = rng.bit();
            record.xi[k] = static_cast<std::uint8_t>(record.xi_prime[k] ^ attack::basis_error(b1, q.a1, q.b1) ^ (b1 == 2));
            record.eta[k] = rng.bit();
            record.eta_prime[k] = static_cast<std::uint8_t>(record.eta[k] ^ attack::basis_error(b2, q.a2, q.b2) ^ (b2 == 2));
        } else {
            // Given the pair, (x, a, t) is uniform and y is fixed.
            const std::size_t p = layout.payload_index[j];
            const std::uint8_t x = rng.bit(), a = rng.bit(), t = rng.bit();
            const int rel = sec.b[p] ? (a ^ q.b1 ^ q.b2) : (q.a1 ^ q.a2);
            sec.x[p] = x;
            sec.a[p] = a;
            sec.t[p] = t;
            sec.w[p] = a ^ t;
            sec.y[p] = static_cast<std::uint8_t>(x ^ t ^ rel);
        }
    }

    std::size_t flips = 0;
    for (std::size_t p = 0; p < n; ++p) flips += (sec.x[p] ^ sec.y[p] ^ (sec.a[p] & sec.b[p])) ^ sec.t[p];
    out.payload_flips = flips;

    out.monitor = monitor::evaluate(record, params.beta_star, params.gamma_star, params.delta);
    sec.r = random_bits(n - params.ell, rng);
    sec.z = classical::hash_inv(keys.u, m, sec.r);
    sec.c = xor_bits(sec.t, sec.z);
    sec.s = params.code.syn(sec.z);
    if (out.monitor.check_a) {
        ClassicalMessage mu;
        mu.a = sec.a;
        mu.c = sec.c;
        out.mu = std::move(mu);
    } else {
        out.monitor.check_b = false;
    }
    const Bits mu_bits = serialize(out.mu);
    if (out.mu) out.mu->tag = classical::mac_tag(keys.mac_alice, mu_bits);
    out.mu_authenticated = out.mu ? classical::mac_verify(keys.mac_alice, mu_bits, out.mu->tag) : true;

    Bits ab(n);
    for (std::size_t p = 0; p < n; ++p) ab[p] = sec.a[p] & sec.b[p];
    sec.z_prime = xor_bits(xor_bits(xor_bits(sec.x, sec.y), sec.c), ab);
    sec.z_hat = params.code.correct(sec.z_prime, sec.s);
    out.decode_success = sec.z_hat == sec.z;

    if (out.mu && out.mu_authenticated) {
        out.omega = out.monitor.check_b;
        if (out.omega) finish_bob(out, sec, params, keys);
    }
    out.omega_tag = classical::mac_tag(keys.mac_bob, Bits{static_cast<std::uint8_t>(out.omega)});
    return out;
}

ChiSquare chi_square_uniform(std::span<const std::size_t> counts) {
    require(counts.size() >= 2, "chi-square needs at least two categories");
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    require(total > 0.0, "chi-square needs a positive total count");
    const double expected = total / static_cast<double>(counts.size());
    ChiSquare out;
    for (std::size_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        out.statistic += d * d / expected;
    }
    out.dof = static_cast<int>(counts.size()) - 1;
    out.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(out.dof), out.statistic));
    return out;
}

namespace {

struct Tally {
    double hits = 0.0;
    double total = 0.0;
    void add(double h, double t) {
        hits += h;
        total += t;
    }
    double rate() const { return total > 0.0 ? hits / total : 0.0; }
};

Comparison compare(std::string name, const Tally& pm, const Tally& epr, double z_max) {
    Comparison c;
    c.name = std::move(name);
    c.pm = pm.rate();
    c.epr = epr.rate();
    const double pooled = (pm.hits + epr.hits) / (pm.total + epr.total);
    const double var = pooled * (1.0 - pooled) * (1.0 / pm.total + 1.0 / epr.total);
    if (var > 0.0) {
        c.z = (c.pm - c.epr) / std::sqrt(var);
    } else {
        c.z = c.pm == c.epr ? 0.0 : std::numeric_limits<double>::infinity();
    }
    c.passed = std::abs(c.z) <= z_max;
    return c;
}

}  // namespace

EquivalenceReport equivalence_check(const ProtocolParams& params, const KeyMaterial& keys, const Bits& m,
                                    const attack::NoiseParams& noise, std::size_t trials,
                                    std::uint64_t seed, double z_max) {
    require(trials >= 1, "equivalence_check needs at least one trial");
    check_inputs(params, keys, m);
    const ChannelModel channel = ChannelModel::independent(noise.beta, noise.gamma);
    const attack::BellDiagonalState source = attack::solve_check_b(noise);

    enum { accept, check_a, decode, delivered, delta1, delta2, joint, flips, count };
    std::array<Tally, count> pm{}, epr{};
    auto tally = [&](std::array<Tally, count>& t, const RunTranscript& r) {
        const double tc = static_cast<double>(params.test_count);
        t[accept].add(r.omega, 1);
        t[check_a].add(r.mu.has_value(), 1);
        t[decode].add(r.decode_success, 1);
        t[delivered].add(r.m_hat && *r.m_hat == m, 1);
        const auto d1 = r.monitor.delta1, d2 = r.monitor.delta2;
        t[delta1].add(static_cast<double>(d1[0] + d1[1] + d1[2]), tc);
        t[delta2].add(static_cast<double>(d2[0] + d2[1] + d2[2]), tc);
        double j = 0.0;
        for (const auto& row : r.monitor.joint)
            for (std::size_t v : row) j += static_cast<double>(v);
        t[joint].add(j, tc);
        t[flips].add(static_cast<double>(r.payload_flips), static_cast<double>(params.n));
    };

    for (std::size_t i = 0; i < trials; ++i) {
        Rng key_rng = Rng::substream(seed, i, 1);
        KeyMaterial k = key_update(keys, params, true, key_rng);
        k.mac_message = keys.mac_message;
        Rng pm_rng = Rng::substream(seed, i, 2);
        Rng epr_rng = Rng::substream(seed, i, 3);
        tally(pm, run_pm_protocol(params, k, m, channel, pm_rng));
        tally(epr, run_epr_protocol(params, k, m, source, epr_rng));
    }

    EquivalenceReport rep;
    rep.trials = trials;
    const char* names[count] = {"accept_rate", "check_a_rate", "decode_rate", "delivery_rate",
                                "delta1_rate", "delta2_rate", "joint_rate",  "payload_flip_rate"};
    for (int q = 0; q < count; ++q) rep.comparisons.push_back(compare(names[q], pm[q], epr[q], z_max));
    rep.passed = std::all_of(rep.comparisons.begin(), rep.comparisons.end(), [](const Comparison& c) { return c.passed; });
    return rep;
}

}  // namespace vsue::protocol
