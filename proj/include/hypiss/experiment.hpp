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

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hypiss/certifier.hpp"
#include "hypiss/io.hpp"
#include "hypiss/lyapunov.hpp"
#include "hypiss/models.hpp"
#include "hypiss/scenario.hpp"
#include "hypiss/solver.hpp"

namespace hypiss {

/// Worker count: HYPISS_THREADS if set to a positive integer, else the
/// hardware concurrency, and never more than `tasks`.
inline unsigned worker_threads(std::size_t tasks) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HYPISS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, tasks)));
}

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Results are
/// written by index, so the output order does not depend on scheduling.
inline void parallel_for_index(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

/// Published gap norms and rates of the constant 2x2 benchmark.
struct ReferenceRow {
    double sup;
    double l2;
    double eta;
};

inline std::optional<ReferenceRow> benchmark_reference(double cfl, int J) {
    static const int Js[] = {200, 400, 800, 1600};
    static const ReferenceRow cfl075[] = {
        {0.23286, 0.36365, 0.57335}, {0.23069, 0.36113, 0.57417}, {0.22918, 0.35931, 0.57459}, {0.22813, 0.35801, 0.57479}};
    static const ReferenceRow cfl1[] = {
        {0.23026, 0.32884, 0.57335}, {0.22886, 0.32746, 0.57417}, {0.2279, 0.32645, 0.57459}, {0.22723, 0.32572, 0.57479}};
    for (int i = 0; i < 4; ++i) {
        if (Js[i] != J) continue;
        if (cfl == 0.75) return cfl075[i];
        if (cfl == 1.0) return cfl1[i];
    }
    return std::nullopt;
}

struct TableRow {
    int J = 0;
    double sup = 0.0;
    double l2 = 0.0;
    double l2_time = 0.0;
    double mu = 0.0;
    double eta = 0.0;
    bool certified = false;
    std::string error;  // nonempty when the row could not be computed
    std::optional<ReferenceRow> reference;
};

/// Certifies, runs and measures one scenario; the envelope uses the certified
/// eta and nu even if the certificate fails.
struct Evaluation {
    CertificateReport certificate;
    SimulationResult result;
    GapNorms gaps;
};

inline Evaluation evaluate_scenario(const Scenario& s, int history_stride = 0) {
    Evaluation e;
    e.certificate = certify(s.coefficients, s.weights, s.grid, s.xi);
    e.result = run(s.simulation(history_stride));
    if (e.certificate.eta > 0.0 && e.certificate.gronwall_ok) {
        attach_envelope(e.result.trace, e.certificate.eta, e.certificate.nu, s.xi);
        e.gaps = envelope_gap_norms(e.result.trace);
    }
    return e;
}

inline TableRow table_row(const Json& root, int J) {
    TableRow row;
    row.J = J;
    try {
        const Scenario s = build_scenario(with_cells(root, J));
        const auto& imp = s.weights.implicit_params();
        row.mu = imp ? imp->mu : std::nan("");
        const auto e = evaluate_scenario(s);
        row.certified = e.certificate.overall;
        row.eta = e.certificate.eta;
        if (!e.result.trace.has_envelope()) throw std::runtime_error("no envelope: eta <= 0 or eta*dt >= 1");
        row.sup = e.gaps.sup;
        row.l2 = e.gaps.l2;
        row.l2_time = e.gaps.l2_time;
        if (matches_linear_benchmark(s)) row.reference = benchmark_reference(s.grid.cfl, J);
    } catch (const std::exception& ex) {
        row.error = ex.what();
    }
    return row;
}

inline std::vector<TableRow> run_table(const Json& root, const std::vector<int>& Js) {
    std::vector<TableRow> rows(Js.size());
    parallel_for_index(Js.size(), worker_threads(Js.size()), [&](std::size_t i) { rows[i] = table_row(root, Js[i]); });
    return rows;
}

inline double relative_deviation(double value, double reference) { return (value - reference) / reference; }

inline void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
    out << csv_version_line << "\nJ,sup_gap,l2_gap,mu,eta,l2_gap_time,certified,ref_sup,ref_l2,ref_eta,dev_sup,dev_l2,dev_eta,error\n";
    for (const auto& r : rows) {
        out << r.J << ',';
        if (r.error.empty())
            out << format_double(r.sup) << ',' << format_double(r.l2) << ',' << format_double(r.mu) << ','
                << format_double(r.eta) << ',' << format_double(r.l2_time) << ',' << (r.certified ? 1 : 0) << ',';
        else
            out << ",,,,,,";
        if (r.reference && r.error.empty())
            out << format_double(r.reference->sup) << ',' << format_double(r.reference->l2) << ','
                << format_double(r.reference->eta) << ',' << format_double(relative_deviation(r.sup, r.reference->sup))
                << ',' << format_double(relative_deviation(r.l2, r.reference->l2)) << ','
                << format_double(relative_deviation(r.eta, r.reference->eta)) << ',';
        else
            out << ",,,,,,";
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        out << err << '\n';
    }
}

inline std::string table_text(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << std::setw(6) << "J" << std::setw(12) << "sup gap" << std::setw(12) << "L2 gap" << std::setw(8) << "mu"
       << std::setw(10) << "eta";
    const bool refs = std::any_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.reference.has_value(); });
    if (refs) os << std::setw(12) << "dev sup" << std::setw(12) << "dev L2" << std::setw(12) << "dev eta";
    os << '\n';
    for (const auto& r : rows) {
        os << std::setw(6) << r.J;
        if (!r.error.empty()) {
            os << "  error: " << r.error << '\n';
            continue;
        }
        os << std::fixed << std::setprecision(5) << std::setw(12) << r.sup << std::setw(12) << r.l2
           << std::setprecision(3) << std::setw(8) << r.mu << std::setprecision(5) << std::setw(10) << r.eta;
        if (r.reference) {
            os << std::showpos << std::setprecision(2) << std::setw(11) << 100.0 * relative_deviation(r.sup, r.reference->sup)
               << '%' << std::setw(11) << 100.0 * relative_deviation(r.l2, r.reference->l2) << '%' << std::setw(11)
               << 100.0 * relative_deviation(r.eta, r.reference->eta) << '%' << std::noshowpos;
        }
        os << std::defaultfloat << '\n';
    }
    return os.str();
}

/// Parses "a:b:steps" into `steps` evenly spaced values from a to b.
inline std::vector<double> parse_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw std::invalid_argument("range must look like a:b:steps, got '" + spec + "'");
    const double a = std::stod(parts[0]);
    const double b = std::stod(parts[1]);
    const int n = std::stoi(parts[2]);
    if (n < 1) throw std::invalid_argument("range needs at least one step");
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
}

inline std::vector<XiSweepRow> run_xi_sweep(const Scenario& s, const std::vector<double>& xis) {
    for (double xi : xis)
        if (!(xi > 0.0)) throw std::invalid_argument("xi values must be positive");
    std::vector<XiSweepRow> rows(xis.size());
    parallel_for_index(xis.size(), worker_threads(xis.size()),
                       [&](std::size_t i) { rows[i] = sweep_point(s.coefficients, s.weights, s.grid, xis[i]); });
    return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<XiSweepRow>& rows) {
    out << csv_version_line << "\nxi,kappa12_bound,kappa21_bound,nu,eta,envelope_gain,boundary_pass\n";
    for (const auto& r : rows)
        out << format_double(r.xi) << ',' << format_double(r.kappa12_bound) << ',' << format_double(r.kappa21_bound)
            << ',' << format_double(r.nu) << ',' << format_double(r.eta) << ',' << format_double(r.envelope_gain) << ','
            << (r.boundary_pass ? 1 : 0) << '\n';
}

/// Summary of one run for the run command.
inline nlohmann::json run_summary(const Scenario& s, const Evaluation& e, double fit_start) {
    const auto& tr = e.result.trace;
    nlohmann::json j = {
        {"scenario", s.name},
        {"certified", e.certificate.overall},
        {"steps", s.grid.N},
        {"dt", s.grid.dt},
        {"dx", s.grid.dx},
        {"L0", tr.L.front()},
        {"final_L", tr.L.back()},
        {"eta", e.certificate.eta},
        {"nu", e.certificate.nu},
        {"xi", s.xi},
        {"notes", s.notes},
    };
    if (tr.has_envelope()) {
        j["max_envelope_violation"] = max_envelope_violation(tr);
        j["sup_gap"] = e.gaps.sup;
        j["l2_gap"] = e.gaps.l2;
        j["l2_gap_time"] = e.gaps.l2_time;
    } else {
        j["max_envelope_violation"] = nullptr;
    }
    try {
        j["measured_decay_rate"] = fit_decay_rate(tr, fit_start);
        j["fit_start"] = fit_start;
    } catch (const std::exception& ex) {
        j["measured_decay_rate"] = nullptr;
        j["fit_error"] = ex.what();
    }
    return j;
}

}  // namespace hypiss
