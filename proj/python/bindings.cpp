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

// Python front end for the simulator. Results cross the boundary as plain
// dicts and lists; configurations go in as JSON text so the Python side uses
// exactly the parser the CLI uses.

#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "vsue/attack.hpp"
#include "vsue/checks.hpp"
#include "vsue/cli.hpp"
#include "vsue/errors.hpp"
#include "vsue/monitor.hpp"
#include "vsue/protocol_io.hpp"
#include "vsue/rng.hpp"
#include "vsue/security.hpp"

namespace py = pybind11;
using namespace vsue;

namespace {

py::dict log_bound(const security::LogBound& b) {
    py::dict d;
    d["exponent"] = b.exponent;
    d["log2_value"] = b.log2_value;
    d["value"] = b.value;
    return d;
}

py::dict summary_dict(const cli::SimulationSummary& s) {
    py::dict d;
    d["trials"] = s.trials;
    d["accepted"] = s.accepted;
    d["check_a_passed"] = s.check_a_passed;
    d["decoded"] = s.decoded;
    d["delivered"] = s.delivered;
    d["mac_failures"] = s.mac_failures;
    d["wrong_messages"] = s.wrong_messages;
    d["payload_bits"] = s.payload_bits;
    d["payload_flips"] = s.payload_flips;
    d["flip_rate"] = s.flip_rate();
    d["expected_flip_rate"] = s.expected_flip_rate;
    d["flip_z"] = s.flip_z();
    return d;
}

}  // namespace

PYBIND11_MODULE(_vsue, m) {
    m.doc() = "Two-way VSUE / QKD simulator core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def("binary_entropy", &security::binary_entropy, py::arg("p"));
    m.def("star", &security::star, py::arg("beta"), py::arg("gamma"));
    m.def("j_entropy", &security::j_entropy, py::arg("beta"));
    m.def("qkd_rate", &security::qkd_rate, py::arg("beta"), py::arg("gamma"));
    m.def("qkd_rate_from_states", &security::qkd_rate_from_states, py::arg("beta"),
          py::arg("gamma"));
    m.def("lm05_rate", &security::lm05_rate, py::arg("beta"), py::arg("gamma"));
    m.def("rate_vsue_refresh", [](double b) { return security::rate_vsue_refresh(b).raw; },
          py::arg("beta_star"));
    m.def("rate_qkd_refresh", [](double b) { return security::rate_qkd_refresh(b).raw; },
          py::arg("beta_star"));

    m.def(
        "theorem_bounds",
        [](double n, double ell, double beta_star, double gamma_star, double pr_accept) {
            const auto b = security::theorem_bounds(n, ell, beta_star, gamma_star, pr_accept);
            py::dict d;
            d["accept"] = log_bound(b.accept);
            d["reject"] = log_bound(b.reject);
            return d;
        },
        py::arg("n"), py::arg("ell"), py::arg("beta_star"), py::arg("gamma_star"),
        py::arg("pr_accept") = 1.0);

    m.def(
        "max_message_length",
        [](double n, double beta_star, double gamma_star) {
            const auto l = security::max_message_length(n, beta_star, gamma_star);
            py::dict d;
            d["ell_max"] = l.ell_max;
            d["accept_limit"] = l.accept_limit;
            d["reject_limit"] = l.reject_limit;
            return d;
        },
        py::arg("n"), py::arg("beta_star"), py::arg("gamma_star"));

    m.def(
        "rate_table",
        [](double lo, double hi, double step) {
            py::list rows;
            for (const auto& r : security::rate_table(lo, hi, step)) {
                py::dict d;
                d["beta"] = r.beta;
                d["rate_vsue"] = r.rate_vsue;
                d["rate_qkd"] = r.rate_qkd;
                d["qkd_two_way"] = r.qkd_two_way;
                d["lm05"] = r.lm05;
                rows.append(d);
            }
            return rows;
        },
        py::arg("lo") = 0.0, py::arg("hi") = 0.2, py::arg("step") = 0.002);

    m.def(
        "reject_case_max",
        [](double beta, int starts, std::uint64_t seed) {
            security::RejectCaseOptions opt;
            opt.starts = starts;
            opt.seed = seed;
            const auto r = security::reject_case_max(beta, opt);
            py::dict d;
            d["beta"] = r.beta;
            d["max_value"] = r.max_value;
            d["closed_form"] = r.closed_form;
            d["entropy_check"] = r.entropy_check;
            d["optimizer"] = std::vector<double>(r.optimizer.coeffs().begin(),
                                                 r.optimizer.coeffs().end());
            d["family_q"] = r.family_q;
            d["family_residual"] = r.family_residual;
            d["converged"] = r.converged;
            return d;
        },
        py::arg("beta"), py::arg("starts") = 20, py::arg("seed") = 1);

    m.def(
        "solve_check_b",
        [](double beta, double gamma) {
            const auto s = attack::solve_check_b({beta, gamma});
            return std::vector<double>(s.coeffs().begin(), s.coeffs().end());
        },
        py::arg("beta"), py::arg("gamma"));

    m.def(
        "error_rates",
        [](const std::vector<double>& coeffs) {
            const auto r = attack::error_rates(attack::BellDiagonalState(coeffs));
            py::dict d;
            d["r1"] = r.r1;
            d["r2"] = r.r2;
            d["joint"] = r.s;
            return d;
        },
        py::arg("coeffs"));

    m.def("default_delta", &monitor::default_delta, py::arg("test_count"));

    m.def(
        "monitor_sample",
        [](std::size_t test_count, double beta, double gamma, bool correlated, double beta_star,
           double gamma_star, double delta, std::uint64_t seed) {
            Rng rng(seed);
            const auto rec = monitor::sample_record(test_count, beta, gamma, correlated, rng);
            const auto v = monitor::evaluate(rec, beta_star, gamma_star, delta);
            py::dict d;
            d["check_a"] = v.check_a;
            d["check_b"] = v.check_b;
            d["beta_hat"] = v.beta_hat;
            d["gamma_hat"] = v.gamma_hat;
            return d;
        },
        py::arg("test_count"), py::arg("beta"), py::arg("gamma"), py::arg("correlated"),
        py::arg("beta_star"), py::arg("gamma_star"), py::arg("delta"), py::arg("seed") = 1);

    m.def(
        "verify_lemmas",
        [](std::uint64_t seed, int random_states, bool include_reject_case, bool inject_fault) {
            checks::SuiteOptions opt;
            opt.seed = seed;
            opt.random_states = random_states;
            opt.include_reject_case = include_reject_case;
            opt.inject_fault = inject_fault;
            py::list out;
            for (const auto& r : checks::run_suite(opt)) {
                py::dict d;
                d["id"] = r.id;
                d["passed"] = r.passed;
                d["max_error"] = r.max_error;
                d["tolerance"] = r.tolerance;
                d["cases"] = r.cases;
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = 2026, py::arg("random_states") = 50,
        py::arg("include_reject_case") = true, py::arg("inject_fault") = false);

    m.def(
        "simulate_json",
        [](const std::string& config_json, unsigned jobs) {
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(config_json);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
            const auto cfg = protocol::config_from_json(doc);
            cli::SimulationSummary s;
            {
                py::gil_scoped_release release;
                s = cli::simulate(cfg, jobs);
            }
            return summary_dict(s);
        },
        py::arg("config_json"), py::arg("jobs") = 1);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"vsue"};
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
