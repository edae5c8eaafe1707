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

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypiss/coefficients.hpp"
#include "hypiss/grid.hpp"

namespace hypiss {

using OdeRhs = std::function<std::vector<double>(double x, const std::vector<double>& w)>;

class SteadyStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One classical RK4 step of size h (h may be negative).
inline std::vector<double> rk4_step(const OdeRhs& f, double x, const std::vector<double>& w, double h) {
    const std::size_t n = w.size();
    auto axpy = [n](const std::vector<double>& a, double s, const std::vector<double>& b) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + s * b[i];
        return r;
    };
    const auto k1 = f(x, w);
    const auto k2 = f(x + 0.5 * h, axpy(w, 0.5 * h, k1));
    const auto k3 = f(x + 0.5 * h, axpy(w, 0.5 * h, k2));
    const auto k4 = f(x + h, axpy(w, h, k3));
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = w[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return r;
}

/// Integrates w' = f(x, w) from w(0) = w0 and returns w at every center
/// x_j, j = -1..J (the left ghost is reached by integrating backwards).
/// Each gap between consecutive samples is covered by `substeps` RK4 steps.
inline std::vector<std::vector<double>> integrate_steady_state(const OdeRhs& f, const std::vector<double>& w0,
                                                               const Grid1D& grid, int substeps = 10) {
    if (substeps < 1) throw std::invalid_argument("integrate_steady_state: substeps must be positive");
    auto march = [&](double x0, std::vector<double> w, double x1) {
        const double h = (x1 - x0) / substeps;
        for (int s = 0; s < substeps; ++s) {
            w = rk4_step(f, x0 + s * h, w, h);
            for (double v : w)
                if (!std::isfinite(v))
                    throw SteadyStateError("integrate_steady_state: non-finite value near x=" +
                                           std::to_string(x0 + (s + 1) * h));
        }
        return w;
    };
    std::vector<std::vector<double>> out(static_cast<std::size_t>(grid.J + 2));
    out[0] = march(0.0, w0, grid.x(-1));
    auto w = march(0.0, w0, grid.x(0));
    out[1] = w;
    for (int j = 1; j <= grid.J; ++j) {
        w = march(grid.x(j - 1), w, grid.x(j));
        out[static_cast<std::size_t>(j + 1)] = w;
    }
    return out;
}

/// Right-hand side of the steady-state system d/dx w* = -Lambda(x)^{-1} Pi(x) w*.
inline OdeRhs steady_state_rhs(SpeedFunction lambda_fn, SourceFunction pi_fn) {
    return [lambda_fn = std::move(lambda_fn), pi_fn = std::move(pi_fn)](double x, const std::vector<double>& w) {
        const auto lam = lambda_fn(x);
        const auto r = pi_fn(x).apply(w);
        std::vector<double> out(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) out[i] = -r[i] / lam[i];
        return out;
    };
}

}  // namespace hypiss
