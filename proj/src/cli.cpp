// Copyright 2026 The amdriver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "amdriver/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "amdriver/analysis.hpp"
#include "amdriver/model.hpp"
#include "amdriver/polytope.hpp"
#include "amdriver/quantum.hpp"
#include "amdriver/state_file.hpp"

namespace amdriver::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Raised for flag combinations CLI11 cannot express; maps to exit code 2.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string csv_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Json schedule_json(const PayoffSchedule &s) {
    Json j;
    j["exit_payoffs"] = std::vector<double>(s.exit_payoffs().begin(), s.exit_payoffs().end());
    j["motel"] = s.motel_payoff();
    return j;
}

Json header(std::string_view command, int n, const Json &schedule) {
    Json j;
    j["command"] = command;
    j["tool_version"] = kToolVersion;
    j["n_intersections"] = n;
    j["schedule"] = schedule;
    return j;
}

Json weights_json(const PolytopeVertex &v) {
    Json w = Json::array();
    if (v.exact_weights()) {
        for (const auto &r : *v.exact_weights()) {
            w.push_back(r.to_string());
        }
    } else {
        for (const auto &[a, p] : v.distribution().entries()) {
            w.push_back(p);
        }
    }
    return w;
}

Json vertex_json(const PolytopeVertex &v) {
    Json j;
    j["id"] = v.label();
    Json support = Json::array();
    Json values = Json::array();
    for (const auto &[a, p] : v.distribution().entries()) {
        support.push_back(a.to_string());
        values.push_back(p);
    }
    j["support"] = std::move(support);
    j["weights"] = weights_json(v);
    j["weight_values"] = std::move(values);
    j["exit_marginal"] = v.distribution().exit_marginals().front();
    return j;
}

struct ResolvedSchedule {
    PayoffSchedule schedule;
    bool reconstructed;
};

ResolvedSchedule resolve_schedule(const RunConfig &cfg) {
    if (cfg.payoff_n) {
        if (cfg.intersections != 0 && cfg.intersections != 3) {
            throw DimensionError("--payoff-n defines a three-intersection schedule");
        }
        return {three_intersection_schedule(*cfg.payoff_n), true};
    }
    PayoffSchedule s(cfg.exit_payoffs, cfg.motel.value_or(0.0));
    if (cfg.intersections != 0 && cfg.intersections != s.intersections()) {
        throw DimensionError("--intersections " + std::to_string(cfg.intersections) +
                             " but " + std::to_string(s.intersections()) +
                             " exit payoffs given");
    }
    return {std::move(s), false};
}

void run_enumerate(const RunConfig &cfg, std::ostream &out) {
    const auto vertices = enumerate_vertices(cfg.intersections);
    if (cfg.format == OutputFormat::Csv) {
        out << "id,size,weights,exit_marginal\n";
        for (const auto &v : vertices) {
            std::string weights;
            for (const auto &w : weights_json(v)) {
                if (!weights.empty()) {
                    weights += ';';
                }
                weights += w.is_string() ? w.get<std::string>() : csv_number(w.get<double>());
            }
            out << v.label() << ',' << v.distribution().support_size() << ',' << weights
                << ',' << csv_number(v.distribution().exit_marginals().front()) << '\n';
        }
        return;
    }
    Json doc = header("enumerate", cfg.intersections, nullptr);
    doc["vertex_count"] = vertices.size();
    Json list = Json::array();
    for (const auto &v : vertices) {
        list.push_back(vertex_json(v));
    }
    doc["vertices"] = std::move(list);
    out << doc.dump(2) << '\n';
}

void run_solve(const RunConfig &cfg, std::ostream &out) {
    const auto [schedule, reconstructed] = resolve_schedule(cfg);
    const auto cmp = compare(schedule);
    Json doc = header("solve", schedule.intersections(), schedule_json(schedule));
    if (reconstructed) {
        doc["schedule_provenance"] = kScheduleProvenance;
    }
    doc["deterministic"] = {{"payoff", cmp.deterministic.payoff},
                            {"action", to_string(cmp.deterministic.action)}};
    doc["probabilistic"] = {{"p", cmp.probabilistic.p_star},
                            {"payoff", cmp.probabilistic.payoff}};
    Json quantum;
    quantum["payoff"] = cmp.quantum.payoff;
    quantum["vertex"] = cmp.quantum.vertex.label();
    quantum["weights"] = weights_json(cmp.quantum.vertex);
    quantum["state"] = state_to_json(cmp.quantum.state);
    quantum["state_verified"] = verify_indistinguishability(cmp.quantum.state).ok;
    doc["quantum"] = std::move(quantum);
    out << doc.dump(2) << '\n';
}

void run_sweep(const RunConfig &cfg, std::ostream &out) {
    const auto curve = sweep(cfg.n_min, cfg.n_max, cfg.step);
    if (cfg.format == OutputFormat::Csv) {
        out << "n,deterministic,probabilistic,quantum,optimal_vertex\n";
        for (const auto &row : curve.rows) {
            out << csv_number(row.n) << ',' << csv_number(row.deterministic) << ','
                << csv_number(row.probabilistic) << ',' << csv_number(row.quantum) << ','
                << format_vertex_id(row.optimal_vertex, 3) << '\n';
        }
        return;
    }
    Json schedule;
    schedule["exit_payoffs"] = Json::array({0.0, "n", 4.0});
    schedule["motel"] = 1.0;
    Json doc = header("sweep", 3, schedule);
    doc["schedule_provenance"] = kScheduleProvenance;
    doc["grid"] = {{"n_min", cfg.n_min}, {"n_max", cfg.n_max}, {"step", cfg.step}};
    Json rows = Json::array();
    for (const auto &row : curve.rows) {
        rows.push_back({{"n", row.n},
                        {"deterministic", row.deterministic},
                        {"probabilistic", row.probabilistic},
                        {"p_star", row.p_star},
                        {"quantum", row.quantum},
                        {"optimal_vertex", format_vertex_id(row.optimal_vertex, 3)}});
    }
    doc["rows"] = std::move(rows);
    Json cross = Json::array();
    for (const auto &c : crossovers(curve)) {
        cross.push_back({{"n", c.n},
                         {"before", format_vertex_id(c.before, 3)},
                         {"after", format_vertex_id(c.after, 3)}});
    }
    doc["crossovers"] = std::move(cross);
    out << doc.dump(2) << '\n';
}

StateVector named_state(const std::string &name) {
    if (name == "singlet") {
        return singlet_state();
    }
    if (name == "ghz") {
        return ghz_state();
    }
    if (name == "w") {
        return w_state();
    }
    if (name == "ghz-prime") {
        return ghz_prime_state();
    }
    throw DomainError("unknown named state '" + name + "'");
}

void run_state(const RunConfig &cfg, std::ostream &out) {
    std::optional<StateVector> psi;
    std::string source;
    if (!cfg.named_state.empty()) {
        psi = named_state(cfg.named_state);
        source = cfg.named_state;
    } else if (cfg.product_p) {
        if (cfg.intersections < 1) {
            throw DomainError("--product-p needs --intersections");
        }
        psi = product_state(*cfg.product_p, cfg.intersections);
        source = "product p=" + csv_number(*cfg.product_p);
    } else {
        int n = cfg.intersections;
        if (n == 0) {
            n = static_cast<int>(cfg.vertex.find('+') == std::string::npos
                                     ? cfg.vertex.size()
                                     : cfg.vertex.find('+'));
        }
        const auto id = parse_vertex_id(cfg.vertex, n);
        const auto vertices = enumerate_vertices(n);
        auto it = std::find_if(vertices.begin(), vertices.end(),
                               [&](const PolytopeVertex &v) { return v.id() == id; });
        if (it == vertices.end()) {
            throw DomainError("'" + cfg.vertex + "' is not a vertex of the " +
                              std::to_string(n) + "-intersection polytope");
        }
        if (cfg.phases.empty()) {
            psi = state_from_vertex(*it);
        } else {
            psi = state_from_vertex(*it, std::span<const double>(cfg.phases));
        }
        source = "vertex " + it->label();
    }
    Json doc = state_to_json(*psi);
    Json meta = header("state", psi->qubits(), nullptr);
    for (auto &[key, value] : meta.items()) {
        doc[key] = value;
    }
    doc["source"] = source;
    out << doc.dump(2) << '\n';
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

void run_verify(const RunConfig &cfg, std::ostream &out) {
    if (!(cfg.tolerance > 0.0)) {
        throw DomainError("--tolerance must be positive");
    }
    const auto psi = read_state_file(cfg.state_file);
    const auto report = verify_indistinguishability(psi, cfg.tolerance);
    const auto born = born_distribution(psi);

    Json doc = header("verify", psi.qubits(), nullptr);
    doc["ok"] = report.ok;
    doc["max_deviation"] = report.max_deviation;
    doc["tolerance"] = cfg.tolerance;
    Json rhos = Json::array();
    for (int site = 1; site <= psi.qubits(); ++site) {
        const auto rho = reduced_density(psi, site);
        rhos.push_back({{"site", site},
                        {"matrix",
                         {{complex_json(rho(0, 0)), complex_json(rho(0, 1))},
                          {complex_json(rho(1, 0)), complex_json(rho(1, 1))}}}});
    }
    doc["reduced_density"] = std::move(rhos);
    doc["exit_marginals"] = born.exit_marginals();
    doc["born_membership"] = verify_membership(born, psi.qubits());
    Json dist;
    for (const auto &[v, w] : born.entries()) {
        dist[v.to_string()] = w;
    }
    doc["born_distribution"] = std::move(dist);
    out << doc.dump(2) << '\n';
}

void run_sample(const RunConfig &cfg, std::ostream &out) {
    if (cfg.shots < 1) {
        throw DomainError("--shots must be at least 1");
    }
    const auto psi = read_state_file(cfg.state_file);
    const auto [schedule, reconstructed] = resolve_schedule(cfg);
    if (schedule.intersections() != psi.qubits()) {
        throw DimensionError("state has " + std::to_string(psi.qubits()) +
                             " qubits, schedule has " +
                             std::to_string(schedule.intersections()) + " intersections");
    }
    const auto samples = sample_outcomes(psi, cfg.shots, *cfg.seed);

    std::map<InstructionArray, std::int64_t> counts;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto &v : samples) {
        ++counts[v];
        const double x = payoff_of_array(v, schedule);
        sum += x;
        sum_sq += x * x;
    }
    const double shots = static_cast<double>(cfg.shots);
    const double mean = sum / shots;
    const double var = cfg.shots > 1
                           ? std::max(0.0, (sum_sq - shots * mean * mean) / (shots - 1.0))
                           : 0.0;

    Json doc = header("sample", psi.qubits(), schedule_json(schedule));
    if (reconstructed) {
        doc["schedule_provenance"] = kScheduleProvenance;
    }
    doc["shots"] = cfg.shots;
    doc["seed"] = *cfg.seed;
    doc["mean_payoff"] = mean;
    doc["std_error"] = std::sqrt(var / shots);
    doc["exact_payoff"] = expected_payoff(born_distribution(psi), schedule);
    Json c = Json::object();
    for (const auto &[v, k] : counts) {
        c[v.to_string()] = k;
    }
    doc["counts"] = std::move(c);
    out << doc.dump(2) << '\n';
}

void dispatch(const RunConfig &cfg, std::ostream &out) {
    switch (cfg.command) {
    case Command::Enumerate:
        run_enumerate(cfg, out);
        return;
    case Command::Solve:
        run_solve(cfg, out);
        return;
    case Command::Sweep:
        run_sweep(cfg, out);
        return;
    case Command::State:
        run_state(cfg, out);
        return;
    case Command::Verify:
        run_verify(cfg, out);
        return;
    case Command::Sample:
        run_sample(cfg, out);
        return;
    }
}

void add_format(CLI::App *cmd, std::string &format, bool csv_allowed) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember(csv_allowed ? std::vector<std::string>{"json", "csv"}
                                          : std::vector<std::string>{"json"}));
}

void add_out(CLI::App *cmd, RunConfig &cfg) {
    cmd->add_option("-o,--out", cfg.out, "Write output to this file instead of stdout");
}

} // namespace

ParseResult parse_args(int argc, const char *const *argv, std::ostream &out,
                       std::ostream &err) {
    CLI::App app{"Optimal strategies for the absent-minded driver problem with "
                 "N indistinguishable intersections"};
    app.name("amdriver");
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "json";
    double motel = 0.0;
    double payoff_n = 0.0;
    double product_p = 0.0;
    std::uint64_t seed = 0;

    auto *enumerate = app.add_subcommand("enumerate", "List the vertices of the indistinguishability polytope");
    enumerate->add_option("-N,--intersections", cfg.intersections, "Number of intersections")
        ->required();
    add_format(enumerate, format, true);
    add_out(enumerate, cfg);

    auto schedule_options = [&](CLI::App *cmd) {
        auto *exits = cmd->add_option("--exit-payoffs", cfg.exit_payoffs,
                                      "Comma-separated exit payoffs r_1..r_N")
                          ->delimiter(',');
        auto *motel_opt = cmd->add_option("--motel", motel, "Payoff when never exiting");
        auto *n_opt = cmd->add_option("--payoff-n", payoff_n,
                                      "Use the three-intersection schedule r=(0,n,4), motel 1");
        n_opt->excludes(exits)->excludes(motel_opt);
        return std::tuple{exits, motel_opt, n_opt};
    };

    auto *solve = app.add_subcommand("solve", "Compare deterministic, probabilistic and entangled optima");
    solve->add_option("-N,--intersections", cfg.intersections, "Number of intersections");
    auto [solve_exits, solve_motel, solve_n] = schedule_options(solve);
    add_format(solve, format, false);
    add_out(solve, cfg);

    auto *sweep_cmd = app.add_subcommand("sweep", "Sweep n for the three-intersection schedule");
    sweep_cmd->add_option("--n-min", cfg.n_min, "First grid point")->capture_default_str();
    sweep_cmd->add_option("--n-max", cfg.n_max, "Last grid point")->capture_default_str();
    sweep_cmd->add_option("--step", cfg.step, "Grid spacing")->capture_default_str();
    add_format(sweep_cmd, format, true);
    add_out(sweep_cmd, cfg);

    auto *state = app.add_subcommand("state", "Write the state file for a vertex or a named state");
    state->add_option("-N,--intersections", cfg.intersections, "Number of intersections");
    auto *vertex_opt = state->add_option("--vertex", cfg.vertex, "Vertex id such as 001+110");
    auto *named_opt = state->add_option("--named", cfg.named_state, "Named state")
                          ->check(CLI::IsMember({"singlet", "ghz", "w", "ghz-prime"}));
    auto *product_opt = state->add_option("--product-p", product_p,
                                          "Product state with CONTINUE probability p");
    state->add_option("--phases", cfg.phases, "Comma-separated phases in radians, one per support array")
        ->delimiter(',')
        ->needs(vertex_opt);
    vertex_opt->excludes(named_opt)->excludes(product_opt);
    named_opt->excludes(product_opt);
    add_format(state, format, false);
    add_out(state, cfg);

    auto *verify = app.add_subcommand("verify", "Check that every site has the same reduced state");
    verify->add_option("--state", cfg.state_file, "State file")->required();
    verify->add_option("--tolerance", cfg.tolerance, "Entrywise tolerance")->capture_default_str();
    add_format(verify, format, false);
    add_out(verify, cfg);

    auto *sample = app.add_subcommand("sample", "Measure a state repeatedly and score the outcomes");
    sample->add_option("--state", cfg.state_file, "State file")->required();
    sample->add_option("--shots", cfg.shots, "Number of measurement rounds")->capture_default_str();
    sample->add_option("--seed", seed, "64-bit RNG seed")->required();
    auto [sample_exits, sample_motel, sample_n] = schedule_options(sample);
    add_format(sample, format, false);
    add_out(sample, cfg);

    try {
        app.parse(argc, argv);
        if (*enumerate) {
            cfg.command = Command::Enumerate;
        } else if (*solve) {
            cfg.command = Command::Solve;
        } else if (*sweep_cmd) {
            cfg.command = Command::Sweep;
        } else if (*state) {
            cfg.command = Command::State;
            if (vertex_opt->count() + named_opt->count() + product_opt->count() != 1) {
                throw UsageError("state needs exactly one of --vertex, --named, --product-p");
            }
        } else if (*verify) {
            cfg.command = Command::Verify;
        } else {
            cfg.command = Command::Sample;
            cfg.seed = seed;
        }

        const auto needs_schedule = [&](CLI::Option *exits, CLI::Option *motel_opt,
                                        CLI::Option *n_opt) {
            if (n_opt->count() > 0) {
                cfg.payoff_n = payoff_n;
            } else if (exits->count() == 0 || motel_opt->count() == 0) {
                throw UsageError("give --exit-payoffs with --motel, or --payoff-n");
            } else {
                cfg.motel = motel;
            }
        };
        if (cfg.command == Command::Solve) {
            needs_schedule(solve_exits, solve_motel, solve_n);
        } else if (cfg.command == Command::Sample) {
            needs_schedule(sample_exits, sample_motel, sample_n);
        }
        if (product_opt->count() > 0) {
            cfg.product_p = product_p;
        }
        cfg.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsageError;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsageError;
    }
    return cfg;
}

int run(const RunConfig &config, std::ostream &out, std::ostream &err) {
    try {
        std::ostringstream buffer;
        dispatch(config, buffer);
        if (config.out.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(config.out, std::ios::binary);
            if (!file || !(file << buffer.str())) {
                throw DomainError("cannot write " + config.out);
            }
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitDomainError;
    }
    return kExitOk;
}

int main_entry(int argc, const char *const *argv, std::ostream &out,
               std::ostream &err) {
    auto parsed = parse_args(argc, argv, out, err);
    if (const int *code = std::get_if<int>(&parsed)) {
        return *code;
    }
    auto cfg = std::get<RunConfig>(std::move(parsed));
    if (cfg.out.empty()) {
        if (const char *override_path = std::getenv(kOutputEnvVar)) {
            cfg.out = override_path;
        }
    }
    return run(cfg, out, err);
}

} // namespace amdriver::cli
