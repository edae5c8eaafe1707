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

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypiss/certifier.hpp"
#include "hypiss/grid.hpp"
#include "hypiss/lyapunov.hpp"
#include "hypiss/state.hpp"

namespace hypiss {

inline constexpr const char* csv_version_line = "# hypiss-v1";

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

}  // namespace detail

/// Columns n, t, L, U, sup_b_sq. U is left empty when no envelope is attached.
inline void write_trace_csv(std::ostream& out, const LyapunovTrace& trace) {
    out << csv_version_line << "\nn,t,L,U,sup_b_sq\n";
    for (std::size_t n = 0; n < trace.size(); ++n) {
        out << n << ',' << format_double(trace.t[n]) << ',' << format_double(trace.L[n]) << ','
            << (trace.has_envelope() ? format_double(trace.U[n]) : std::string()) << ','
            << format_double(trace.sup_b_sq[n]) << '\n';
    }
}

inline void write_trace_csv(const std::string& path, const LyapunovTrace& trace) {
    auto out = detail::open_output(path);
    write_trace_csv(out, trace);
}

/// Long format: one row per (n, j) for interior cells, columns n, t, j, x_j, w0..w{k-1}.
inline void write_trajectory_csv(std::ostream& out, const std::vector<StateField>& history, const Grid1D& grid) {
    out << csv_version_line << "\nn,t,j,x";
    const int k = history.empty() ? 0 : history.front().k();
    for (int i = 0; i < k; ++i) out << ",w" << i;
    out << '\n';
    for (const auto& s : history)
        for (int j = 0; j < s.J(); ++j) {
            out << s.n << ',' << format_double(s.t) << ',' << j << ',' << format_double(grid.x(j));
            for (int i = 0; i < k; ++i) out << ',' << format_double(s(j, i));
            out << '\n';
        }
}

inline void write_trajectory_csv(const std::string& path, const std::vector<StateField>& history,
                                 const Grid1D& grid) {
    auto out = detail::open_output(path);
    write_trajectory_csv(out, history, grid);
}

inline nlohmann::json witness_json(const std::optional<Witness>& w) {
    if (!w) return nullptr;
    return {{"condition", w->condition}, {"j", w->j},         {"component", w->component},
            {"value", w->value},         {"detail", w->detail}};
}

inline nlohmann::json certificate_json(const CertificateReport& r) {
    using nlohmann::json;
    json c3 = {{"pass", r.c3.pass}, {"eigenvalues", r.c3.eigenvalues}, {"witness", witness_json(r.c3.witness)}};
    if (r.c3.kappa12_bound) c3["kappa12_bound"] = *r.c3.kappa12_bound;
    if (r.c3.kappa21_bound) c3["kappa21_bound"] = *r.c3.kappa21_bound;
    return {
        {"overall", r.overall},
        {"eta", r.eta},
        {"eta_theta", r.c1.eta_theta},
        {"eta_from_exponential_bound", r.c1.eta_from_exponential_bound},
        {"nu", r.nu},
        {"xi", r.xi},
        {"dt", r.dt},
        {"zeta", r.zeta},
        {"beta", r.beta},
        {"C1", r.C1},
        {"C2", r.C2},
        {"gronwall_ok", r.gronwall_ok},
        {"c1", {{"pass", r.c1.pass}, {"witness", witness_json(r.c1.witness)}}},
        {"c2",
         {{"pass", r.c2.pass}, {"min_eigenvalue", r.c2.min_eigenvalue}, {"witness", witness_json(r.c2.witness)}}},
        {"c3", c3},
        {"first_failure", witness_json(r.first_failure)},
    };
}

inline std::string certificate_text(const CertificateReport& r, const std::string& name = "") {
    std::ostringstream os;
    os << std::setprecision(6);
    if (!name.empty()) os << "scenario: " << name << '\n';
    os << "C1 transport (Theta_j > 0):        " << (r.c1.pass ? "pass" : "FAIL") << '\n';
    os << "C2 source (M_j >= 0):              " << (r.c2.pass ? "pass" : "FAIL")
       << "  min eigenvalue " << r.c2.min_eigenvalue << '\n';
    os << "C3 boundary (B_c >= 0):            " << (r.c3.pass ? "pass" : "FAIL") << '\n';
    if (r.c3.kappa12_bound) os << "  |kappa12| <= " << *r.c3.kappa12_bound << '\n';
    if (r.c3.kappa21_bound) os << "  |kappa21| <= " << *r.c3.kappa21_bound << '\n';
    os << "eta = " << r.eta << "  (min Theta/P = " << r.c1.eta_theta << ")\n";
    os << "nu = " << r.nu << "  xi = " << r.xi << "  dt = " << r.dt << "  eta*dt < 1: " << (r.gronwall_ok ? "yes" : "no")
       << '\n';
    os << "C1 = beta/zeta = " << r.C1 << "  C2 = nu/zeta = " << r.C2 << '\n';
    os << "overall: " << (r.overall ? "PASS" : "FAIL") << '\n';
    if (r.first_failure) {
        const auto& w = *r.first_failure;
        os << "first failure: " << w.condition;
        if (w.j >= 0) os << " at j=" << w.j;
        if (w.component >= 0) os << " component " << w.component;
        os << " value " << w.value << " (" << w.detail << ")\n";
    }
    return os.str();
}

}  // namespace hypiss
