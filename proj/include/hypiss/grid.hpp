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
#include <stdexcept>
#include <string>

namespace hypiss {

class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Uniform space-time mesh on [0, l] x [0, T].
///
/// Cells are indexed j = 0..J-1 with centers x_j = (j + 1/2) dx; the two ghost
/// cells j = -1 and j = J sit half a cell outside each boundary. The time step
/// is fixed by the Courant number, and the last of the N steps is shortened so
/// that the final time lands exactly on T.
struct Grid1D {
    double l = 1.0;
    int J = 2;
    double T = 1.0;
    double cfl = 1.0;
    double lambda_max = 1.0;
    double dx = 0.5;
    double dt = 0.5;
    int N = 2;

    /// Cell center for j in [-1, J], ghosts included.
    double x(int j) const noexcept { return (j + 0.5) * dx; }

    /// t^n; t^N is exactly T.
    double t(int n) const noexcept { return n >= N ? T : n * dt; }

    /// Length of the step that advances t^n to t^{n+1}.
    double step(int n) const noexcept { return t(n + 1) - t(n); }

    double courant() const noexcept { return dt * lambda_max / dx; }
};

/// Builds the mesh with dt = cfl * dx / lambda_max and N = ceil(T / dt).
inline Grid1D build_grid(double l, int J, double T, double cfl, double lambda_max) {
    if (!(l > 0.0) || !std::isfinite(l)) throw GridError("build_grid: length l must be positive");
    if (J < 2) throw GridError("build_grid: cell count J must be at least 2");
    if (!(T > 0.0) || !std::isfinite(T)) throw GridError("build_grid: final time T must be positive");
    if (!(cfl > 0.0)) throw GridError("build_grid: Courant number must be positive");
    if (cfl > 1.0) throw GridError("build_grid: Courant number " + std::to_string(cfl) + " violates CFL (> 1)");
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max))
        throw GridError("build_grid: lambda_max must be positive");

    Grid1D g;
    g.l = l;
    g.J = J;
    g.T = T;
    g.cfl = cfl;
    g.lambda_max = lambda_max;
    g.dx = l / J;
    g.dt = cfl * g.dx / lambda_max;
    // Relative slack keeps T/dt = 2.0000000000000004 from producing a sliver step.
    const double steps = T / g.dt;
    g.N = static_cast<int>(std::ceil(steps - 1e-9 * steps));
    if (g.N < 1) g.N = 1;
    return g;
}

}  // namespace hypiss
