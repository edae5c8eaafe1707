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
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hypiss/coefficients.hpp"
#include "hypiss/disturbance.hpp"
#include "hypiss/grid.hpp"
#include "hypiss/lyapunov.hpp"
#include "hypiss/state.hpp"
#include "hypiss/weights.hpp"

namespace hypiss {

class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, int step) : std::runtime_error(what), step_(step) {}
    int step() const noexcept { return step_; }

private:
    int step_;
};

namespace detail {

inline void check_shapes(const StateField& state, const SystemCoefficients& coeffs) {
    if (state.k() != coeffs.k() || state.J() != coeffs.J())
        throw std::invalid_argument("solver: state and coefficients have different shapes");
}

}  // namespace detail

/// Throws if dt * max|lambda| / dx exceeds one (with round-off slack).
inline void check_cfl(const SystemCoefficients& coeffs, double dx, double dt) {
    const double courant = dt * coeffs.max_speed() / dx;
    if (courant > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "CFL violated: dt*max|lambda|/dx = " << courant;
        throw SimulationError(os.str(), -1);
    }
}

/// Upwind transport sub-step. Speeds are read on the upwind neighbour:
/// W+ uses Lambda+_{j-1} and W- uses |Lambda-|_{j+1}. Ghost values are copied.
///
/// The update is written as the convex combination (1 - c) W_j + c W_{j-1},
/// which makes the unit-Courant case an exact copy.
inline StateField transport_step(const StateField& state, const SystemCoefficients& coeffs, double dx, double dt) {
    detail::check_shapes(state, coeffs);
    check_cfl(coeffs, dx, dt);
    const int k = coeffs.k();
    const int m = coeffs.m();
    const double ratio = dt / dx;
    StateField out = state;
    for (int j = 0; j < state.J(); ++j) {
        for (int i = 0; i < m; ++i) {
            const double c = ratio * coeffs.speed(j - 1, i);
            out(j, i) = (1.0 - c) * state(j, i) + c * state(j - 1, i);
        }
        for (int i = m; i < k; ++i) {
            const double c = ratio * coeffs.speed(j + 1, i);
            out(j, i) = (1.0 - c) * state(j, i) + c * state(j + 1, i);
        }
    }
    return out;
}

/// Explicit Euler source sub-step W_j <- (I - dt Pi_j) W_j on interior cells.
inline StateField source_step(const StateField& intermediate, const SystemCoefficients& coeffs, double dt) {
    detail::check_shapes(intermediate, coeffs);
    const int k = coeffs.k();
    StateField out = intermediate;
    for (int j = 0; j < intermediate.J(); ++j) {
        const Matrix& pi = coeffs.pi(j);
        const auto w = intermediate.cell(j);
        for (int r = 0; r < k; ++r) {
            double s = 0.0;
            for (int c = 0; c < k; ++c)
                s += pi(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) * w[static_cast<std::size_t>(c)];
            out(j, r) = w[static_cast<std::size_t>(r)] - dt * s;
        }
    }
    return out;
}

/// Sets the ghost cells from [W+_{-1}; W-_J] = K [W+_{J-1}; W-_0] + M b.
inline void apply_boundary(StateField& state, const SystemCoefficients& coeffs, std::span<const double> b) {
    detail::check_shapes(state, coeffs);
    const int k = coeffs.k();
    const int m = coeffs.m();
    const int J = state.J();
    if (static_cast<int>(b.size()) != k) throw std::invalid_argument("apply_boundary: disturbance has wrong size");

    std::vector<double> outgoing(static_cast<std::size_t>(k));
    for (int i = 0; i < m; ++i) outgoing[static_cast<std::size_t>(i)] = state(J - 1, i);
    for (int i = m; i < k; ++i) outgoing[static_cast<std::size_t>(i)] = state(0, i);
    auto incoming = coeffs.K().apply(outgoing);
    const auto injected = coeffs.M().apply(b);
    for (int i = 0; i < k; ++i) incoming[static_cast<std::size_t>(i)] += injected[static_cast<std::size_t>(i)];

    for (int i = 0; i < k; ++i) {
        state(-1, i) = i < m ? incoming[static_cast<std::size_t>(i)] : 0.0;
        state(J, i) = i < m ? 0.0 : incoming[static_cast<std::size_t>(i)];
    }
}

/// Initial ghosts from the compatibility condition (feedback only, no disturbance).
inline void apply_compatibility(StateField& state, const SystemCoefficients& coeffs) {
    const std::vector<double> none(static_cast<std::size_t>(coeffs.k()), 0.0);
    apply_boundary(state, coeffs, none);
}

/// Builds the level-0 state from interior values (cell-major, J*k entries)
/// and fills the ghosts from the compatibility condition.
inline StateField initial_state(const SystemCoefficients& coeffs, std::span<const double> interior) {
    if (interior.size() != static_cast<std::size_t>(coeffs.J() * coeffs.k()))
        throw std::invalid_argument("initial_state: expected J*k interior values");
    StateField s(coeffs.k(), coeffs.J());
    for (int j = 0; j < coeffs.J(); ++j)
        for (int i = 0; i < coeffs.k(); ++i)
            s(j, i) = interior[static_cast<std::size_t>(j * coeffs.k() + i)];
    apply_compatibility(s, coeffs);
    return s;
}

/// Everything one simulation needs; the run owns its state.
struct SimulationRun {
    Grid1D grid;
    SystemCoefficients coefficients;
    WeightField weights;
    DisturbanceSignal disturbance;
    std::vector<double> initial;  // interior W^0, cell-major
    int history_stride = 0;       // 0 keeps no state history
    std::function<void(const StateField&)> on_step;
};

struct SimulationResult {
    LyapunovTrace trace;
    StateField final_state;
    std::vector<StateField> history;
};

/// Runs n = 0..N-1. Per step: transport, source, ghosts from b(t^{n+1}),
/// then the Lyapunov value of the new level is recorded.
inline SimulationResult run(const SimulationRun& sim) {
    const Grid1D& grid = sim.grid;
    const auto& coeffs = sim.coefficients;
    if (sim.disturbance.k() != coeffs.k()) throw std::invalid_argument("run: disturbance dimension mismatch");
    if (sim.weights.k() != coeffs.k() || sim.weights.J() != coeffs.J())
        throw std::invalid_argument("run: weights do not match coefficients");
    if (coeffs.J() != grid.J) throw std::invalid_argument("run: coefficients sampled on a different grid");

    SimulationResult result;
    auto& trace = result.trace;
    trace.dx = grid.dx;
    trace.dt = grid.dt;
    const auto steps = static_cast<std::size_t>(grid.N) + 1;
    trace.t.reserve(steps);
    trace.L.reserve(steps);
    trace.sup_b_sq.reserve(steps);
    trace.energy.reserve(steps);

    StateField state = initial_state(coeffs, sim.initial);
    state.n = 0;
    state.t = 0.0;

    SupTracker sup;
    auto record = [&](const StateField& s) {
        trace.t.push_back(s.t);
        trace.L.push_back(evaluate(s, sim.weights, grid.dx));
        trace.energy.push_back(discrete_energy(s, grid.dx));
        if (sim.history_stride > 0 && s.n % sim.history_stride == 0) result.history.push_back(s);
        if (sim.on_step) sim.on_step(s);
    };
    trace.sup_b_sq.push_back(0.0);
    record(state);

    for (int n = 0; n < grid.N; ++n) {
        const double h = grid.step(n);
        StateField next = source_step(transport_step(state, coeffs, grid.dx, h), coeffs, h);
        const auto b = sim.disturbance(grid.t(n + 1));
        apply_boundary(next, coeffs, b);
        next.n = n + 1;
        next.t = grid.t(n + 1);
        for (double v : next.raw())
            if (!std::isfinite(v))
                throw SimulationError("run: non-finite state at step " + std::to_string(n + 1), n + 1);
        // sup over s <= n of the ghost disturbances that drove this step; b^0 is absent.
        trace.sup_b_sq.push_back(sup.value());
        sup.observe(b);
        state = std::move(next);
        record(state);
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace hypiss
