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
#include "vsue/protocol_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "vsue/errors.hpp"

namespace vsue::protocol {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read(const json& obj, const char* key, T& dst, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        dst = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

std::size_t read_count(const json& obj, const char* key, std::size_t fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(where + "." + key + " must be a non-negative integer");
    return v.get<std::size_t>();
}

json bits_json(std::span<const std::uint8_t> b) { return vsue::to_string(b); }

}  // namespace

std::string to_string(Variant v) { return v == Variant::pm ? "pm" : "epr"; }

std::string to_string(ChannelMode m) {
    switch (m) {
        case ChannelMode::independent_flip: return "independent_flip";
        case ChannelMode::bell_diagonal: return "bell_diagonal";
        case ChannelMode::intercept_resend: return "intercept_resend";
    }
    return "independent_flip";
}

classical::LinearCode CodeSpec::build(const std::filesystem::path& base_dir) const {
    using classical::LinearCode;
    if (family == "hamming74") {
        if (blocks == 0) throw ConfigError("code.blocks must be positive");
        return LinearCode::repeated(LinearCode::hamming74(), blocks);
    }
    if (family == "random_systematic") {
        if (blocks == 0) throw ConfigError("code.blocks must be positive");
        if (block_k == 0 || block_k >= block_n) throw ConfigError("code needs 0 < block_k < block_n");
        Rng rng(seed, 0x636f6465);
        std::vector<LinearCode> parts;
        for (std::size_t i = 0; i < blocks; ++i) parts.push_back(LinearCode::random_systematic(block_n, block_k, rng));
        return LinearCode::direct_sum(parts);
    }
    if (family == "matrix") {
        if (path.empty()) throw ConfigError("code.path is required for family 'matrix'");
        const std::filesystem::path p(path);
        return LinearCode::load_matrix(p.is_absolute() ? p : base_dir / p);
    }
    throw ConfigError("unknown code family '" + family + "'");
}

SimulationConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
    only_keys(doc, {"schema", "variant", "params", "code", "channel", "trials", "seed", "out"}, "config");
    SimulationConfig cfg;
    if (doc.contains("schema") && doc.at("schema") != kConfigSchema)
        throw ConfigError(std::string("config schema must be ") + kConfigSchema);
    std::string variant = "pm";
    read(doc, "variant", variant, "config");
    if (variant == "pm") {
        cfg.variant = Variant::pm;
    } else if (variant == "epr") {
        cfg.variant = Variant::epr;
    } else {
        throw ConfigError("config.variant must be 'pm' or 'epr'");
    }
    cfg.trials = read_count(doc, "trials", cfg.trials, "config");
    if (cfg.trials == 0) throw ConfigError("config.trials must be positive");
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned() && !(doc.at("seed").is_number_integer() && doc.at("seed").get<long long>() >= 0))
            throw ConfigError("config.seed must be a non-negative integer");
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("out")) {
        std::string out;
        read(doc, "out", out, "config");
        cfg.out = out;
    }

    ProtocolParams& p = cfg.params;
    std::optional<double> delta;
    if (doc.contains("params")) {
        const json& j = doc.at("params");
        only_keys(j, {"n", "test_count", "ell", "beta_star", "gamma_star", "delta", "message_tag_bits", "mac_field_bits",
                      "channel_tag_bits"},
                  "params");
        p.n = read_count(j, "n", p.n, "params");
        p.test_count = read_count(j, "test_count", p.test_count, "params");
        p.ell = read_count(j, "ell", p.ell, "params");
        read(j, "beta_star", p.beta_star, "params");
        read(j, "gamma_star", p.gamma_star, "params");
        if (j.contains("delta") && !j.at("delta").is_null()) {
            double d = 0.0;
            read(j, "delta", d, "params");
            delta = d;
        }
        p.message_tag_bits = read_count(j, "message_tag_bits", p.message_tag_bits, "params");
        p.mac_field_bits = static_cast<unsigned>(read_count(j, "mac_field_bits", p.mac_field_bits, "params"));
        p.channel_tag_bits = static_cast<unsigned>(read_count(j, "channel_tag_bits", p.channel_tag_bits, "params"));
    }
    if (p.test_count < 9) throw ConfigError("params.test_count must be at least 9");
    p.delta = delta ? *delta : monitor::default_delta(p.test_count);

    if (doc.contains("code")) {
        const json& j = doc.at("code");
        only_keys(j, {"family", "blocks", "block_n", "block_k", "seed", "path"}, "code");
        read(j, "family", cfg.code.family, "code");
        cfg.code.blocks = read_count(j, "blocks", cfg.code.blocks, "code");
        cfg.code.block_n = read_count(j, "block_n", cfg.code.block_n, "code");
        cfg.code.block_k = read_count(j, "block_k", cfg.code.block_k, "code");
        cfg.code.seed = read_count(j, "seed", cfg.code.seed, "code");
        read(j, "path", cfg.code.path, "code");
    }
    try {
        p.code = cfg.code.build(base_dir);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("code: ") + e.what());
    }

    if (doc.contains("channel")) {
        const json& j = doc.at("channel");
        only_keys(j, {"mode", "beta", "gamma", "lambda"}, "channel");
        std::string mode = "independent_flip";
        read(j, "mode", mode, "channel");
        if (mode == "independent_flip") {
            double beta = 0.0, gamma = 0.0;
            read(j, "beta", beta, "channel");
            read(j, "gamma", gamma, "channel");
            cfg.channel = ChannelModel::independent(beta, gamma);
        } else if (mode == "bell_diagonal") {
            if (j.contains("lambda")) {
                std::vector<double> lambda;
                read(j, "lambda", lambda, "channel");
                if (lambda.size() != 16) throw ConfigError("channel.lambda must have 16 entries");
                try {
                    cfg.channel = ChannelModel::bell_diagonal(attack::BellDiagonalState(lambda));
                } catch (const std::exception& e) {
                    throw ConfigError(std::string("channel.lambda: ") + e.what());
                }
            } else {
                double beta = 0.0, gamma = 0.0;
                read(j, "beta", beta, "channel");
                read(j, "gamma", gamma, "channel");
                try {
                    cfg.channel = ChannelModel::bell_diagonal(attack::solve_check_b({beta, gamma}));
                } catch (const std::exception& e) {
                    throw ConfigError(std::string("channel: ") + e.what());
                }
            }
        } else if (mode == "intercept_resend") {
            cfg.channel = ChannelModel::intercept_resend();
        } else {
            throw ConfigError("unknown channel mode '" + mode + "'");
        }
    }
    p.validate();
    if (cfg.variant == Variant::epr) (void)epr_source(cfg.channel);
    return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return config_from_json(doc, path.parent_path());
}

json config_to_json(const SimulationConfig& cfg) {
    const ProtocolParams& p = cfg.params;
    json doc;
    doc["schema"] = kConfigSchema;
    doc["variant"] = to_string(cfg.variant);
    doc["params"] = {{"n", p.n},
                     {"test_count", p.test_count},
                     {"ell", p.ell},
                     {"beta_star", p.beta_star},
                     {"gamma_star", p.gamma_star},
                     {"delta", p.delta},
                     {"message_tag_bits", p.message_tag_bits},
                     {"mac_field_bits", p.mac_field_bits},
                     {"channel_tag_bits", p.channel_tag_bits}};
    json code = {{"family", cfg.code.family}};
    if (cfg.code.family == "matrix") {
        code["path"] = cfg.code.path;
    } else {
        code["blocks"] = cfg.code.blocks;
        if (cfg.code.family == "random_systematic") {
            code["block_n"] = cfg.code.block_n;
            code["block_k"] = cfg.code.block_k;
            code["seed"] = cfg.code.seed;
        }
    }
    doc["code"] = code;
    json ch = {{"mode", to_string(cfg.channel.mode)}};
    if (cfg.channel.mode == ChannelMode::independent_flip) {
        ch["beta"] = cfg.channel.noise.beta;
        ch["gamma"] = cfg.channel.noise.gamma;
    } else if (cfg.channel.mode == ChannelMode::bell_diagonal) {
        const auto& c = cfg.channel.state.coeffs();
        ch["lambda"] = std::vector<double>(c.begin(), c.end());
    }
    doc["channel"] = ch;
    doc["trials"] = cfg.trials;
    doc["seed"] = cfg.seed;
    if (cfg.out) doc["out"] = *cfg.out;
    return doc;
}

attack::BellDiagonalState epr_source(const ChannelModel& channel) {
    switch (channel.mode) {
        case ChannelMode::bell_diagonal: return channel.state;
        case ChannelMode::independent_flip:
            try {
                return attack::solve_check_b(channel.noise);
            } catch (const std::exception& e) {
                throw ConfigError(std::string("EPR source: ") + e.what());
            }
        case ChannelMode::intercept_resend: break;
    }
    throw ConfigError("the EPR variant needs an independent_flip or bell_diagonal channel");
}

json transcript_to_json(const RunTranscript& t, std::size_t trial) {
    json j;
    j["trial"] = trial;
    j["variant"] = to_string(t.variant);
    if (t.mu) {
        json mu;
        if (t.variant == Variant::pm) {
            mu["masked_xi_prime"] = bits_json(t.mu->masked_xi_prime);
            mu["masked_syndrome"] = bits_json(t.mu->masked_syndrome);
        } else {
            mu["a"] = bits_json(t.mu->a);
        }
        mu["c"] = bits_json(t.mu->c);
        mu["tag"] = bits_json(t.mu->tag);
        j["mu"] = mu;
    } else {
        j["mu"] = nullptr;
    }
    j["mu_authenticated"] = t.mu_authenticated;
    j["omega"] = t.omega ? 1 : 0;
    j["omega_tag"] = bits_json(t.omega_tag);
    j["m_hat"] = t.m_hat ? json(bits_json(*t.m_hat)) : json(nullptr);
    const auto& v = t.monitor;
    j["monitor"] = {{"check_a", v.check_a},     {"check_b", v.check_b}, {"beta_hat", v.beta_hat},
                    {"gamma_hat", v.gamma_hat}, {"delta1", v.delta1},   {"delta2", v.delta2},
                    {"joint", v.joint}};
    j["diagnostics"] = {{"mac_failure", t.mac_failure},
                        {"decode_success", t.decode_success},
                        {"payload_flips", t.payload_flips}};
    return j;
}

}  // namespace vsue::protocol
