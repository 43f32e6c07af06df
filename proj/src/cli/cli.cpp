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
#include "vsue/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "vsue/attack.hpp"
#include "vsue/errors.hpp"
#include "vsue/security.hpp"

namespace vsue::cli {

namespace {

using nlohmann::json;
using protocol::ChannelMode;
using protocol::Variant;

// Substream role tags for one trial.
constexpr std::uint32_t kKeysRole = 1;
constexpr std::uint32_t kMessageRole = 2;
constexpr std::uint32_t kRunRole = 3;

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

json summary_json(const SimulationSummary& s) {
    return {{"type", "summary"},
            {"trials", s.trials},
            {"accepted", s.accepted},
            {"check_a_passed", s.check_a_passed},
            {"decode_success", s.decoded},
            {"delivered", s.delivered},
            {"mac_failures", s.mac_failures},
            {"wrong_messages", s.wrong_messages},
            {"payload_bits", s.payload_bits},
            {"payload_flips", s.payload_flips},
            {"flip_rate", s.flip_rate()},
            {"expected_flip_rate", s.expected_flip_rate},
            {"flip_z", s.flip_z()}};
}

// Flag overrides layered on top of the config document.
struct SimulateFlags {
    std::string config, variant, channel, code, code_matrix, out;
    double beta = 0, gamma = 0, beta_star = 0, gamma_star = 0, delta = 0;
    std::size_t test_count = 0, ell = 0, n = 0, trials = 0, code_blocks = 0, code_block_n = 0, code_block_k = 0;
    std::uint64_t seed = 0, code_seed = 0;
};

}  // namespace

double SimulationSummary::flip_rate() const {
    return payload_bits ? static_cast<double>(payload_flips) / static_cast<double>(payload_bits) : 0.0;
}

double SimulationSummary::flip_z() const {
    const double q = expected_flip_rate;
    const double sigma = std::sqrt(q * (1 - q) / std::max<double>(1.0, static_cast<double>(payload_bits)));
    if (sigma == 0.0) return flip_rate() == q ? 0.0 : std::numeric_limits<double>::infinity();
    return (flip_rate() - q) / sigma;
}

double expected_flip_rate(const protocol::ChannelModel& channel, Variant variant) {
    switch (channel.mode) {
        case ChannelMode::independent_flip: return security::star(channel.noise.beta, channel.noise.gamma);
        case ChannelMode::intercept_resend: return 1.0 / 3.0;
        case ChannelMode::bell_diagonal: break;
    }
    (void)variant;
    // Payload bases are z or x with probability 1/2 each.
    double q = 0.0;
    for (int i = 0; i < 16; ++i) {
        const int a1 = i >> 3 & 1, b1 = i >> 2 & 1, a2 = i >> 1 & 1, b2 = i & 1;
        for (int b = 0; b < 2; ++b)
            if (attack::basis_error(b, a1, b1) ^ attack::basis_error(b, a2, b2)) q += 0.5 * channel.state[static_cast<std::size_t>(i)];
    }
    return q;
}

std::vector<double> parse_grid(const std::string& spec) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !in.eof())
        throw ConfigError("grid must look like lo:hi:step, got '" + spec + "'");
    if (!(step > 0) || !(lo <= hi) || lo < 0) throw ConfigError("grid needs 0 <= lo <= hi and step > 0");
    std::vector<double> out;
    for (long k = 0;; ++k) {
        const double v = lo + static_cast<double>(k) * step;
        if (v > hi + step / 2) break;
        out.push_back(v);
        if (out.size() > 100000) throw ConfigError("grid has too many points");
    }
    return out;
}

SimulationSummary simulate(const protocol::SimulationConfig& cfg, unsigned jobs,
                           std::vector<protocol::RunTranscript>* transcripts) {
    const auto& params = cfg.params;
    Rng master = Rng::substream(cfg.seed, 0, 0);
    const protocol::KeyMaterial base = protocol::generate_keys(params, master);
    const auto source = cfg.variant == Variant::epr ? protocol::epr_source(cfg.channel) : attack::BellDiagonalState();

    std::vector<protocol::RunTranscript> runs(cfg.trials);
    std::vector<std::uint8_t> wrong(cfg.trials, 0);
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < cfg.trials; i += stride) {
            Rng key_rng = Rng::substream(cfg.seed, i + 1, kKeysRole);
            const auto keys = protocol::key_update(base, params, true, key_rng);
            Rng msg_rng = Rng::substream(cfg.seed, i + 1, kMessageRole);
            const Bits m = protocol::random_tagged_message(keys, params, msg_rng);
            Rng rng = Rng::substream(cfg.seed, i + 1, kRunRole);
            runs[i] = cfg.variant == Variant::pm ? protocol::run_pm_protocol(params, keys, m, cfg.channel, rng)
                                                 : protocol::run_epr_protocol(params, keys, m, source, rng);
            // The transcript does not keep m, so a wrong delivery is judged here.
            wrong[i] = runs[i].m_hat && *runs[i].m_hat != m;
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cfg.trials)));
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
        for (auto& t : pool) t.join();
    }

    SimulationSummary s;
    s.trials = cfg.trials;
    s.expected_flip_rate = expected_flip_rate(cfg.channel, cfg.variant);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        s.wrong_messages += wrong[i];
        s.accepted += r.omega;
        s.check_a_passed += r.mu.has_value();
        s.decoded += r.decode_success;
        s.delivered += r.m_hat.has_value() && !wrong[i];
        s.mac_failures += r.mac_failure;
        s.payload_bits += params.n;
        s.payload_flips += r.payload_flips;
    }
    if (transcripts) *transcripts = std::move(runs);
    return s;
}

int cmd_simulate(const protocol::SimulationConfig& cfg, unsigned jobs, std::ostream& out) {
    std::vector<protocol::RunTranscript> runs;
    const SimulationSummary s = simulate(cfg, jobs, cfg.out ? &runs : nullptr);
    if (cfg.out) {
        std::ofstream f(*cfg.out);
        if (!f) throw ConfigError("cannot write " + *cfg.out);
        f << json{{"schema", protocol::kTranscriptSchema}, {"type", "header"}, {"config", protocol::config_to_json(cfg)}}.dump()
          << "\n";
        for (std::size_t i = 0; i < runs.size(); ++i) {
            json line = protocol::transcript_to_json(runs[i], i);
            line["type"] = "trial";
            f << line.dump() << "\n";
        }
        f << summary_json(s).dump() << "\n";
    }
    const double t = static_cast<double>(s.trials);
    const auto& p = cfg.params;
    out << "variant            " << protocol::to_string(cfg.variant) << "\n"
        << "channel            " << protocol::to_string(cfg.channel.mode) << "\n"
        << "trials             " << s.trials << "\n"
        << "accepted           " << s.accepted << " (" << fixed(s.accepted / t) << ")\n"
        << "check_a_passed     " << s.check_a_passed << " (" << fixed(s.check_a_passed / t) << ")\n"
        << "decode_success     " << s.decoded << " (" << fixed(s.decoded / t) << ")\n"
        << "delivered          " << s.delivered << " (" << fixed(s.delivered / t) << ")\n"
        << "mac_failures       " << s.mac_failures << (s.mac_failures ? "  ANOMALY: accepted but message tag failed" : "")
        << "\n"
        << "wrong_messages     " << s.wrong_messages << (s.wrong_messages ? "  ANOMALY: tag verified on a wrong message" : "")
        << "\n"
        << "flip_rate          " << fixed(s.flip_rate()) << " expected " << fixed(s.expected_flip_rate) << " z "
        << fixed(s.flip_z(), 3) << "\n"
        << "syndrome_bits      " << p.code.syndrome_bits() << " asymptotic n*h(beta* star gamma*) "
        << fixed(static_cast<double>(p.n) * security::binary_entropy(security::star(p.beta_star, p.gamma_star)), 3)
        << "\n";
    return kSuccess;
}

int cmd_verify_lemmas(const VerifyConfig& cfg, std::ostream& out) {
    const auto results = checks::run_suite(cfg.suite);
    for (const auto& c : results) {
        char line[256];
        std::snprintf(line, sizeof line, "%s %-32s max_error=%.3e tol=%.0e cases=%zu", c.passed ? "PASS" : "FAIL",
                      c.id.c_str(), c.max_error, c.tolerance, c.cases);
        out << line << "\n";
    }
    const bool ok = checks::all_passed(results);
    if (cfg.out) {
        std::ofstream f(*cfg.out);
        if (!f) throw ConfigError("cannot write " + *cfg.out);
        f << checks::report_json(results, cfg.suite).dump(2) << "\n";
    }
    out << (ok ? "all checks passed" : "some checks FAILED") << "\n";
    return ok ? kSuccess : kCheckFailure;
}

int cmd_rates(const RatesConfig& cfg, std::ostream& out) {
    const auto rows = security::rate_table(cfg.lo, cfg.hi, cfg.step);
    security::write_rates_csv(cfg.out, rows);
    out << "wrote " << rows.size() << " rows to " << cfg.out << "\n";
    const std::pair<const char*, std::function<double(double)>> curves[] = {
        {"rate_vsue", [](double b) { return security::rate_vsue_refresh(b).raw; }},
        {"rate_qkd", [](double b) { return security::rate_qkd_refresh(b).raw; }},
        {"qkd_two_way", [](double b) { return security::qkd_rate(b, b); }},
        {"lm05", [](double b) { return security::lm05_rate(b, b); }},
    };
    for (const auto& [name, f] : curves) {
        const auto root = security::zero_crossing(f, 0.0, 0.5);
        out << "zero_crossing " << name << " " << (root ? fixed(*root, 6) : std::string("none")) << "\n";
    }
    return kSuccess;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulator and verifier for two-way quantum unclonable encryption"};
    app.require_subcommand(1);
    unsigned jobs = 1;

    SimulateFlags sf;
    auto* sim = app.add_subcommand("simulate", "run protocol trials and summarize them");
    sim->add_option("--config", sf.config, "JSON run configuration");
    sim->add_option("--variant", sf.variant, "pm or epr");
    sim->add_option("--channel", sf.channel, "independent_flip, bell_diagonal or intercept_resend");
    sim->add_option("--beta", sf.beta, "channel-1 flip rate");
    sim->add_option("--gamma", sf.gamma, "channel-2 flip rate");
    sim->add_option("--beta-star", sf.beta_star, "CheckA threshold");
    sim->add_option("--gamma-star", sf.gamma_star, "CheckB threshold");
    sim->add_option("--delta", sf.delta, "monitor tolerance");
    sim->add_option("--n", sf.n, "payload positions");
    sim->add_option("--test-count", sf.test_count, "test positions");
    sim->add_option("--ell", sf.ell, "message length with tag");
    sim->add_option("--code", sf.code, "hamming74, random_systematic or matrix");
    sim->add_option("--code-blocks", sf.code_blocks, "number of code blocks");
    sim->add_option("--code-block-n", sf.code_block_n, "random block length");
    sim->add_option("--code-block-k", sf.code_block_k, "random block dimension");
    sim->add_option("--code-seed", sf.code_seed, "random code seed");
    sim->add_option("--code-matrix", sf.code_matrix, "parity-check matrix file");
    sim->add_option("--trials", sf.trials, "number of runs");
    sim->add_option("--seed", sf.seed, "master seed");
    sim->add_option("--out", sf.out, "JSON-lines transcript file");
    sim->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));

    std::string vconfig, vgrid, vout;
    std::uint64_t vseed = 0;
    int vstates = 0;
    bool fault = false, skip_reject = false;
    auto* ver = app.add_subcommand("verify-lemmas", "check the attack-model identities against reference computations");
    ver->add_option("--config", vconfig, "JSON options");
    ver->add_option("--seed", vseed, "seed for the random states");
    ver->add_option("--beta-grid", vgrid, "reject-case grid lo:hi:step");
    ver->add_option("--states", vstates, "random states per check")->check(CLI::Range(1, 100000));
    ver->add_flag("--inject-fault", fault, "perturb one Bell coefficient (negative control)");
    ver->add_flag("--skip-reject", skip_reject, "leave out the reject-case optimization");
    ver->add_option("--out", vout, "JSON report file");

    std::string rconfig, rout;
    double rlo = 0, rhi = 0, rstep = 0;
    auto* rat = app.add_subcommand("rates", "write rate curves as CSV");
    rat->add_option("--config", rconfig, "JSON options");
    rat->add_option("--lo", rlo, "first beta");
    rat->add_option("--hi", rhi, "last beta");
    rat->add_option("--step", rstep, "beta step");
    rat->add_option("--out", rout, "CSV file (default rates.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (sim->parsed()) {
            json doc = sf.config.empty() ? json::object() : read_json_file(sf.config);
            if (!doc.is_object()) throw ConfigError("config must be a JSON object");
            auto set = [&](const char* section, const char* key, auto value, const char* flag) {
                if (!sim->count(flag)) return;
                if (section) {
                    doc[section][key] = value;
                } else {
                    doc[key] = value;
                }
            };
            set(nullptr, "variant", sf.variant, "--variant");
            set("channel", "mode", sf.channel, "--channel");
            set("channel", "beta", sf.beta, "--beta");
            set("channel", "gamma", sf.gamma, "--gamma");
            if ((sim->count("--beta") || sim->count("--gamma")) && doc["channel"].contains("lambda"))
                doc["channel"].erase("lambda");
            set("params", "beta_star", sf.beta_star, "--beta-star");
            set("params", "gamma_star", sf.gamma_star, "--gamma-star");
            set("params", "delta", sf.delta, "--delta");
            set("params", "n", sf.n, "--n");
            set("params", "test_count", sf.test_count, "--test-count");
            set("params", "ell", sf.ell, "--ell");
            set("code", "family", sf.code, "--code");
            set("code", "blocks", sf.code_blocks, "--code-blocks");
            set("code", "block_n", sf.code_block_n, "--code-block-n");
            set("code", "block_k", sf.code_block_k, "--code-block-k");
            set("code", "seed", sf.code_seed, "--code-seed");
            set("code", "path", sf.code_matrix, "--code-matrix");
            set(nullptr, "trials", sf.trials, "--trials");
            set(nullptr, "seed", sf.seed, "--seed");
            set(nullptr, "out", sf.out, "--out");
            const auto base = sf.config.empty() ? std::filesystem::path{} : std::filesystem::path(sf.config).parent_path();
            const auto cfg = protocol::config_from_json(doc, base);
            return cmd_simulate(cfg, jobs, out);
        }
        if (ver->parsed()) {
            VerifyConfig cfg;
            if (!vconfig.empty()) {
                const json doc = read_json_file(vconfig);
                if (!doc.is_object()) throw ConfigError("config must be a JSON object");
                for (const auto& [key, value] : doc.items()) {
                    try {
                        if (key == "seed") cfg.suite.seed = value.get<std::uint64_t>();
                        else if (key == "states") cfg.suite.random_states = value.get<int>();
                        else if (key == "beta_grid") cfg.suite.beta_grid = parse_grid(value.get<std::string>());
                        else if (key == "inject_fault") cfg.suite.inject_fault = value.get<bool>();
                        else if (key == "skip_reject") cfg.suite.include_reject_case = !value.get<bool>();
                        else if (key == "out") cfg.out = value.get<std::string>();
                        else throw ConfigError("unknown key '" + key + "' in verify-lemmas config");
                    } catch (const json::exception&) {
                        throw ConfigError("verify-lemmas config key '" + key + "' has the wrong type");
                    }
                }
            }
            if (ver->count("--seed")) cfg.suite.seed = vseed;
            if (ver->count("--states")) cfg.suite.random_states = vstates;
            if (ver->count("--beta-grid")) cfg.suite.beta_grid = parse_grid(vgrid);
            if (fault) cfg.suite.inject_fault = true;
            if (skip_reject) cfg.suite.include_reject_case = false;
            if (ver->count("--out")) cfg.out = vout;
            if (cfg.suite.random_states < 1) throw ConfigError("states must be positive");
            for (double b : cfg.suite.beta_grid)
                if (b > 2.0 / 3.0) throw ConfigError("beta grid must stay within [0, 2/3]");
            return cmd_verify_lemmas(cfg, out);
        }
        RatesConfig cfg;
        if (!rconfig.empty()) {
            const json doc = read_json_file(rconfig);
            if (!doc.is_object()) throw ConfigError("config must be a JSON object");
            for (const auto& [key, value] : doc.items()) {
                try {
                    if (key == "lo") cfg.lo = value.get<double>();
                    else if (key == "hi") cfg.hi = value.get<double>();
                    else if (key == "step") cfg.step = value.get<double>();
                    else if (key == "out") cfg.out = value.get<std::string>();
                    else throw ConfigError("unknown key '" + key + "' in rates config");
                } catch (const json::exception&) {
                    throw ConfigError("rates config key '" + key + "' has the wrong type");
                }
            }
        }
        if (rat->count("--lo")) cfg.lo = rlo;
        if (rat->count("--hi")) cfg.hi = rhi;
        if (rat->count("--step")) cfg.step = rstep;
        if (rat->count("--out")) cfg.out = rout;
        if (!(cfg.step > 0) || !(cfg.lo >= 0) || !(cfg.hi >= cfg.lo) || cfg.hi > 2.0 / 3.0)
            throw ConfigError("rates need 0 <= lo <= hi <= 2/3 and step > 0");
        if ((cfg.hi - cfg.lo) / cfg.step > 1e6) throw ConfigError("rates grid has too many points");
        return cmd_rates(cfg, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
}

}  // namespace vsue::cli
