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
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypiss/grid.hpp"
#include "hypiss/state.hpp"
#include "hypiss/weights.hpp"

namespace hypiss {

class LyapunovError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// L = dx * sum_{j=0}^{J-1} W_j^T P_j W_j. Ghost cells are excluded.
inline double evaluate(const StateField& state, const WeightField& weights, double dx) {
    if (state.k() != weights.k() || state.J() != weights.J())
        throw LyapunovError("evaluate: state and weights have different shapes");
    double sum = 0.0;
    for (int j = 0; j < state.J(); ++j)
        for (int i = 0; i < state.k(); ++i) {
            const double p = weights.p(j, i);
            if (!(p > 0.0)) throw LyapunovError("evaluate: nonpositive weight at j=" + std::to_string(j));
            const double w = state(j, i);
            sum += p * w * w;
        }
    return dx * sum;
}

/// dx * sum_j |W_j|^2 over interior cells.
inline double discrete_energy(const StateField& state, double dx) {
    double sum = 0.0;
    for (double w : state.interior()) sum += w * w;
    return dx * sum;
}

/// Discrete Lyapunov history of one run together with its decay envelope.
///
/// sup_b_sq[n] is the running maximum of |b^s|^2 over 1 <= s <= n-1: the
/// disturbance values whose ghost data entered the steps leading to level n.
/// b^0 never enters because the initial ghosts carry no disturbance.
struct LyapunovTrace {
    std::vector<double> t;
    std::vector<double> L;
    std::vector<double> sup_b_sq;
    std::vector<double> energy;
    std::vector<double> U;  // empty until an envelope is attached
    double eta = 0.0;
    double nu = 0.0;
    double xi = 0.0;
    double dx = 0.0;
    double dt = 0.0;

    std::size_t size() const noexcept { return L.size(); }
    bool has_envelope() const noexcept { return U.size() == L.size() && !L.empty(); }
};

enum class EnvelopeForm {
    Exponential,  // e^{-eta t^n} L^0 + (nu/eta)(1 + 1/xi) sup
    Recursion,    // (L^0 - z/eta) prod(1 - eta dt_s) + z/eta with z = nu (1 + 1/xi) sup
};

/// Gronwall envelope U^n for the series t^n, sup_b_sq^n. Requires eta * dt < 1
/// for every step so the discrete contraction factor stays in (0, 1).
inline std::vector<double> gronwall_envelope(double L0, double eta, double nu, double xi,
                                             const std::vector<double>& t, const std::vector<double>& sup_b_sq,
                                             EnvelopeForm form = EnvelopeForm::Exponential) {
    if (!(eta > 0.0)) throw LyapunovError("gronwall_envelope: eta must be positive");
    if (!(xi > 0.0)) throw LyapunovError("gronwall_envelope: xi must be positive");
    if (t.size() != sup_b_sq.size()) throw LyapunovError("gronwall_envelope: series length mismatch");
    for (std::size_t n = 1; n < t.size(); ++n)
        if (eta * (t[n] - t[n - 1]) >= 1.0)
            throw LyapunovError("gronwall_envelope: eta*dt >= 1, discrete Gronwall bound does not apply");

    const double gain = nu / eta * (1.0 + 1.0 / xi);
    std::vector<double> U(t.size());
    double factor = 1.0;
    for (std::size_t n = 0; n < t.size(); ++n) {
        if (n > 0) factor *= 1.0 - eta * (t[n] - t[n - 1]);
        const double offset = gain * sup_b_sq[n];
        U[n] = form == EnvelopeForm::Exponential ? std::exp(-eta * t[n]) * L0 + offset
                                                 : (L0 - offset) * factor + offset;
    }
    return U;
}

/// Fills trace.U with the exponential envelope built from trace.L[0].
inline void attach_envelope(LyapunovTrace& trace, double eta, double nu, double xi) {
    if (trace.L.empty()) throw LyapunovError("attach_envelope: empty trace");
    trace.eta = eta;
    trace.nu = nu;
    trace.xi = xi;
    trace.U = gronwall_envelope(trace.L.front(), eta, nu, xi, trace.t, trace.sup_b_sq);
}

/// Closed-form bound on y^n for (y^{s+1} - y^s)/dt <= -a y^s + z, y^0 = c:
/// (c - z/a)(1 - a dt)^n + z/a.
inline double discrete_gronwall_bound(double c, double a, double z, double dt, int n) {
    if (!(a > 0.0) || !(a * dt > 0.0) || a * dt >= 1.0)
        throw LyapunovError("discrete_gronwall_bound: requires a > 0 and 0 < a*dt < 1");
    return (c - z / a) * std::pow(1.0 - a * dt, n) + z / a;
}

/// Iterates the recursion at equality, y^{s+1} = y^s + dt(-a y^s + z), n times.
inline double discrete_gronwall_recursion(double c, double a, double z, double dt, int n) {
    double y = c;
    for (int s = 0; s < n; ++s) y += dt * (-a * y + z);
    return y;
}

/// Continuous Gronwall bound (c - z/a) e^{-a t} + z/a.
inline double gronwall_bound(double c, double a, double z, double t) {
    return (c - z / a) * std::exp(-a * t) + z / a;
}

struct GapNorms {
    double sup = 0.0;      // max_n |U^n - L^n|
    double l2 = 0.0;       // sqrt(dx * sum_n (U^n - L^n)^2), the tabulated L2 column
    double l2_time = 0.0;  // sqrt(sum_n dt_n (U^n - L^n)^2), time-weighted variant
};

/// Norms over the time index of the gap between envelope and Lyapunov value.
inline GapNorms envelope_gap_norms(const LyapunovTrace& trace) {
    if (!trace.has_envelope()) throw LyapunovError("envelope_gap_norms: trace has no envelope");
    GapNorms g;
    double sum = 0.0;
    double sum_t = 0.0;
    for (std::size_t n = 0; n < trace.size(); ++n) {
        const double d = trace.U[n] - trace.L[n];
        g.sup = std::max(g.sup, std::abs(d));
        sum += d * d;
        const double h = n == 0 ? trace.dt : trace.t[n] - trace.t[n - 1];
        sum_t += h * d * d;
    }
    g.l2 = std::sqrt(trace.dx * sum);
    g.l2_time = std::sqrt(sum_t);
    return g;
}

/// Least-squares slope of log L^n against t^n on [t_start, T], returned as a
/// positive decay rate.
inline double fit_decay_rate(const LyapunovTrace& trace, double t_start) {
    std::vector<double> ts, ys;
    for (std::size_t n = 0; n < trace.size(); ++n) {
        if (trace.t[n] < t_start) continue;
        if (!(trace.L[n] > 0.0))
            throw LyapunovError("fit_decay_rate: nonpositive L at n=" + std::to_string(n));
        ts.push_back(trace.t[n]);
        ys.push_back(std::log(trace.L[n]));
    }
    if (ts.size() < 10) throw LyapunovError("fit_decay_rate: fewer than 10 samples in the window");
    const double c = static_cast<double>(ts.size());
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        tm += ts[i];
        ym += ys[i];
    }
    tm /= c;
    ym /= c;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - tm) * (ts[i] - tm);
        sty += (ts[i] - tm) * (ys[i] - ym);
    }
    return -sty / stt;
}

/// Largest L^n - U^n; positive values are envelope violations.
inline double max_envelope_violation(const LyapunovTrace& trace) {
    if (!trace.has_envelope()) throw LyapunovError("max_envelope_violation: trace has no envelope");
    double v = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < trace.size(); ++n) v = std::max(v, trace.L[n] - trace.U[n]);
    return v;
}

}  // namespace hypiss
