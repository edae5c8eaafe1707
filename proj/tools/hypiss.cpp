// Copyright 2026 The hypiss Authors
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

// hypiss: certify, simulate and tabulate discrete ISS experiments.
//
// Exit codes: 0 success, 1 certificate failure, 2 usage or scenario error,
// 3 simulation aborted on a non-finite value.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hypiss/experiment.hpp"

namespace fs = std::filesystem;
using namespace hypiss;

namespace {

enum Exit { kOk = 0, kCertificateFail = 1, kUsage = 2, kNonFinite = 3 };

struct Options {
    std::string scenario;
    std::string out = ".";
    bool force = false;
    int stride = 0;
    std::vector<int> j_list;
    std::string xi_range;
    std::vector<double> mu_list;
    double fit_start = -1.0;
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    f << text;
}

void write_certificate(const fs::path& dir, const std::string& stem, const Scenario& s, const CertificateReport& r) {
    auto j = certificate_json(r);
    j["scenario"] = s.name;
    j["notes"] = s.notes;
    write_file(dir / (stem + ".json"), j.dump(2) + "\n");
    write_file(dir / (stem + ".txt"), certificate_text(r, s.name));
}

int cmd_certify(const Options& o) {
    const Scenario s = load_scenario(o.scenario);
    const auto r = certify(s.coefficients, s.weights, s.grid, s.xi);
    write_certificate(o.out, "certificate", s, r);
    std::cout << certificate_text(r, s.name);
    for (const auto& n : s.notes) std::cout << "note: " << n << '\n';
    return r.overall ? kOk : kCertificateFail;
}

int cmd_run(const Options& o) {
    const Json root = load_scenario_json(o.scenario);
    std::vector<Json> variants;
    std::vector<std::string> stems;
    if (o.mu_list.empty()) {
        variants.push_back(root);
        stems.push_back("");
    } else {
        for (double mu : o.mu_list) {
            variants.push_back(with_mu(root, mu));
            stems.push_back("_mu_" + format_double(mu));
        }
    }
    std::vector<Scenario> scenarios;
    for (const auto& v : variants) scenarios.push_back(build_scenario(v));

    int code = kOk;
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const auto& s = scenarios[i];
        const auto r = certify(s.coefficients, s.weights, s.grid, s.xi);
        write_certificate(o.out, "certificate" + stems[i], s, r);
        if (!r.overall) {
            std::cerr << "certificate failed for " << s.name << stems[i] << (o.force ? " (running anyway: --force)" : "")
                      << '\n'
                      << certificate_text(r);
            if (!o.force) {
                code = kCertificateFail;
                continue;
            }
        }
        todo.push_back(i);
    }

    std::vector<std::string> errors(todo.size());
    std::vector<int> codes(todo.size(), kOk);
    parallel_for_index(todo.size(), worker_threads(todo.size()), [&](std::size_t t) {
        const std::size_t i = todo[t];
        const auto& s = scenarios[i];
        try {
            const auto e = evaluate_scenario(s, o.stride);
            const double fit = o.fit_start >= 0.0 ? o.fit_start : 0.5 * s.grid.T;
            write_trace_csv((fs::path(o.out) / ("trace" + stems[i] + ".csv")).string(), e.result.trace);
            write_file(fs::path(o.out) / ("summary" + stems[i] + ".json"), run_summary(s, e, fit).dump(2) + "\n");
            if (o.stride > 0)
                write_trajectory_csv((fs::path(o.out) / ("trajectory" + stems[i] + ".csv")).string(), e.result.history,
                                     s.grid);
        } catch (const SimulationError& ex) {
            errors[t] = ex.what();
            codes[t] = kNonFinite;
        }
    });
    for (std::size_t t = 0; t < todo.size(); ++t) {
        const auto& s = scenarios[todo[t]];
        if (codes[t] != kOk) {
            std::cerr << "run aborted for " << s.name << stems[todo[t]] << ": " << errors[t] << '\n';
            code = kNonFinite;
        } else {
            std::cout << "wrote trace" << stems[todo[t]] << ".csv (" << s.grid.N + 1 << " levels)\n";
        }
    }
    return code;
}

int cmd_table(const Options& o) {
    if (o.j_list.empty()) throw CLI::ValidationError("--J-list", "table needs --J-list");
    for (std::size_t i = 0; i < o.j_list.size(); ++i) {
        if (o.j_list[i] < 2) throw CLI::ValidationError("--J-list", "entries must be at least 2");
        if (i > 0 && o.j_list[i] <= o.j_list[i - 1])
            throw CLI::ValidationError("--J-list", "entries must be strictly increasing");
    }
    const Json root = load_scenario_json(o.scenario);
    build_scenario(root);  // surface description errors before spawning rows
    const auto rows = run_table(root, o.j_list);
    std::ofstream csv(fs::path(o.out) / "table.csv", std::ios::binary);
    write_table_csv(csv, rows);
    const std::string text = table_text(rows);
    write_file(fs::path(o.out) / "table.txt", text);
    std::cout << text;
    int code = kOk;
    for (const auto& r : rows) {
        if (!r.error.empty()) code = r.error.find("non-finite") != std::string::npos ? kNonFinite : kCertificateFail;
        else if (!r.certified && code == kOk) code = kCertificateFail;
    }
    return code;
}

int cmd_sweep(const Options& o) {
    if (o.xi_range.empty()) throw CLI::ValidationError("--xi-range", "sweep needs --xi-range a:b:steps");
    std::vector<double> xis;
    try {
        xis = parse_range(o.xi_range);
    } catch (const std::exception& e) {
        throw CLI::ValidationError("--xi-range", e.what());
    }
    const Scenario s = load_scenario(o.scenario);
    const auto rows = run_xi_sweep(s, xis);
    std::ofstream csv(fs::path(o.out) / "sweep.csv", std::ios::binary);
    write_sweep_csv(csv, rows);
    write_sweep_csv(std::cout, rows);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypiss: discrete ISS certification and simulation for linear hyperbolic balance laws"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* sub) {
        sub->add_option("--scenario", o.scenario, "scenario description (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory (created if missing)");
    };
    auto* certify_cmd = app.add_subcommand("certify", "check the discrete ISS conditions");
    add_common(certify_cmd);
    auto* run_cmd = app.add_subcommand("run", "simulate and record the Lyapunov trace");
    add_common(run_cmd);
    run_cmd->add_flag("--force", o.force, "run even if the certificate fails");
    run_cmd->add_option("--stride", o.stride, "keep every n-th state in trajectory.csv (0: none)")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--mu-list", o.mu_list, "run once per weight exponent mu")->delimiter(',');
    run_cmd->add_option("--fit-start", o.fit_start, "start of the decay-rate fit window (default T/2)");
    auto* table_cmd = app.add_subcommand("table", "gap norms between envelope and Lyapunov value per J");
    add_common(table_cmd);
    table_cmd->add_option("--J-list", o.j_list, "cell counts, strictly increasing")->delimiter(',')->required();
    auto* sweep_cmd = app.add_subcommand("sweep", "kappa bounds, nu and envelope gain over xi");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--xi-range", o.xi_range, "a:b:steps")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        fs::create_directories(o.out);
        if (*certify_cmd) return cmd_certify(o);
        if (*run_cmd) return cmd_run(o);
        if (*table_cmd) return cmd_table(o);
        if (*sweep_cmd) return cmd_sweep(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << '\n';
        return kUsage;
    } catch (const SimulationError& e) {
        std::cerr << "simulation aborted: " << e.what() << '\n';
        return kNonFinite;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
