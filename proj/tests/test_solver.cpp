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

#include <cmath>
#include <limits>

#include "catch_amalgamated.hpp"
#include "hypiss/certifier.hpp"
#include "hypiss/models.hpp"
#include "hypiss/solver.hpp"
#include "support.hpp"

using namespace hypiss;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemCoefficients constant_system(const Grid1D& g, double l1, double l2, const Matrix& pi, BoundaryMatrices b) {
    return sample_coefficients([=](double) { return std::vector<double>{l1, l2}; }, [=](double) { return pi; }, g,
                               std::move(b));
}

StateField filled(int J, const std::vector<double>& interior) {
    StateField s(2, J);
    for (int j = 0; j < J; ++j)
        for (int i = 0; i < 2; ++i) s(j, i) = interior[static_cast<std::size_t>(2 * j + i)];
    return s;
}

}  // namespace

TEST_CASE("transport of the zero state") {
    const auto g = build_grid(1.0, 8, 1.0, 0.75, 1.0);
    const auto c = constant_system(g, 1.0, -1.0, Matrix(2, 2), boundary_2x2(0.5, 0.5, 1.0, 1.0));
    const auto out = transport_step(StateField(2, 8), c, g.dx, g.dt);
    for (double v : out.raw()) CHECK(v == 0.0);
}

TEST_CASE("transport at unit Courant number is a shift") {
    const auto g = build_grid(1.0, 6, 1.0, 1.0, 1.0);
    const auto c = constant_system(g, 1.0, -1.0, Matrix(2, 2), boundary_2x2(0.0, 0.0, 0.0, 0.0));
    StateField s(2, 6);
    for (int j = -1; j <= 6; ++j) {
        s(j, 0) = 10.0 + j;
        s(j, 1) = 100.0 + j;
    }
    const auto out = transport_step(s, c, g.dx, g.dt);
    for (int j = 0; j < 6; ++j) {
        CHECK(out(j, 0) == s(j - 1, 0));
        CHECK(out(j, 1) == s(j + 1, 1));
    }
}

TEST_CASE("transport keeps a constant state with matching ghosts") {
    const auto g = build_grid(1.0, 10, 1.0, 0.6, 2.0);
    const auto c = constant_system(g, 2.0, -0.5, Matrix(2, 2), boundary_2x2(0.0, 0.0, 0.0, 0.0));
    StateField s(2, 10);
    for (int j = -1; j <= 10; ++j) {
        s(j, 0) = 0.7;
        s(j, 1) = -1.3;
    }
    const auto out = transport_step(s, c, g.dx, g.dt);
    for (int j = 0; j < 10; ++j) {
        CHECK_THAT(out(j, 0), WithinAbs(0.7, 1e-15));
        CHECK_THAT(out(j, 1), WithinAbs(-1.3, 1e-15));
    }
}

TEST_CASE("transport reads speeds on the upwind neighbour") {
    // Speeds vary with x; the update must use lambda+_{j-1} and |lambda-_{j+1}|.
    const auto g = build_grid(1.0, 4, 1.0, 0.5, 2.0);
    const auto c = sample_coefficients([](double x) { return std::vector<double>{1.0 + x, -(1.0 + x)}; },
                                       [](double) { return Matrix(2, 2); }, g, boundary_2x2(0.0, 0.0, 0.0, 0.0));
    StateField s(2, 4);
    for (int j = -1; j <= 4; ++j) {
        s(j, 0) = j * j;
        s(j, 1) = 3.0 * j;
    }
    const auto out = transport_step(s, c, g.dx, g.dt);
    const double r = g.dt / g.dx;
    for (int j = 0; j < 4; ++j) {
        const double ep = s(j, 0) - r * c.lambda(j - 1, 0) * (s(j, 0) - s(j - 1, 0));
        const double em = s(j, 1) + r * c.speed(j + 1, 1) * (s(j + 1, 1) - s(j, 1));
        CHECK_THAT(out(j, 0), WithinAbs(ep, 1e-14));
        CHECK_THAT(out(j, 1), WithinAbs(em, 1e-14));
    }
}

TEST_CASE("transport rejects a CFL violation") {
    const auto g = build_grid(1.0, 4, 1.0, 1.0, 1.0);
    const auto c = constant_system(g, 1.0, -1.0, Matrix(2, 2), boundary_2x2(0.0, 0.0, 0.0, 0.0));
    CHECK_THROWS_AS(transport_step(StateField(2, 4), c, g.dx, 1.01 * g.dt), SimulationError);
    CHECK_THROWS(transport_step(StateField(2, 5), c, g.dx, g.dt));
}

TEST_CASE("source step examples") {
    const auto g = build_grid(1.0, 2, 1.0, 1.0, 1.0);
    SECTION("zero source is the identity") {
        const auto c = constant_system(g, 1.0, -1.0, Matrix(2, 2), boundary_2x2(0.0, 0.0, 0.0, 0.0));
        const auto s = filled(2, {1.0, 2.0, 3.0, 4.0});
        const auto out = source_step(s, c, 0.1);
        for (std::size_t i = 0; i < s.raw().size(); ++i) CHECK(out.raw()[i] == s.raw()[i]);
    }
    SECTION("2x2 product by hand") {
        const auto c = constant_system(g, 1.0, -1.0, Matrix{{0.3, -0.1}, {-0.1, 0.3}}, boundary_2x2(0, 0, 0, 0));
        const auto out = source_step(filled(2, {1.0, 1.0, 1.0, 1.0}), c, 0.1);
        CHECK_THAT(out(0, 0), WithinAbs(0.98, 1e-15));
        CHECK_THAT(out(0, 1), WithinAbs(0.98, 1e-15));
    }
    SECTION("scalar system") {
        const auto g1 = build_grid(1.0, 3, 1.0, 1.0, 1.0);
        const auto c = sample_coefficients([](double) { return std::vector<double>{1.0}; },
                                           [](double) { return Matrix{{0.7}}; }, g1, {Matrix{{0.0}}, Matrix{{0.0}}});
        StateField s(1, 3);
        s(1, 0) = 2.0;
        const auto out = source_step(s, c, 0.25);
        CHECK_THAT(out(1, 0), WithinAbs(2.0 * (1.0 - 0.25 * 0.7), 1e-15));
    }
}

TEST_CASE("boundary update examples") {
    const auto g = build_grid(1.0, 4, 1.0, 1.0, 1.0);
    SECTION("pure injection") {
        const auto c = constant_system(g, 1.0, -1.0, Matrix(2, 2), boundary_2x2(0.0, 0.0, 1.0, 1.0));
        StateField s(2, 4);
        apply_boundary(s, c, std::vector<double>{0.3, -0.3});
        CHECK(s(-1, 0) == 0.3);
        CHECK(s(4, 1) == -0.3);
        CHECK(s(-1, 1) == 0.0);
        CHECK(s(4, 0) == 0.0);
    }
    SECTION("feedback block product") {
        const auto c = constant_system(g, 1.0, -1.0, Matrix(2, 2), boundary_2x2(0.5, 0.5, 1.0, 1.0));
        StateField s(2, 4);
        s(0, 1) = 0.5;
        s(3, 0) = -0.5;
        apply_boundary(s, c, std::vector<double>{0.0, 0.0});
        CHECK(s(-1, 0) == 0.25);
        CHECK(s(4, 1) == -0.25);
    }
    SECTION("compatibility ignores the disturbance") {
        const auto c = constant_system(g, 1.0, -1.0, Matrix(2, 2), boundary_2x2(0.5, 0.5, 1.0, 1.0));
        std::vector<double> interior(8, 0.0);
        interior[1] = 0.5;   // W-_0
        interior[6] = -0.5;  // W+_3
        const auto s = initial_state(c, interior);
        CHECK(s(-1, 0) == 0.25);
        CHECK(s(4, 1) == -0.25);
    }
    StateField s(2, 4);
    CHECK_THROWS(apply_boundary(s, constant_system(g, 1.0, -1.0, Matrix(2, 2), boundary_2x2(0, 0, 0, 0)),
                                std::vector<double>{1.0}));
}

TEST_CASE("zero data stays exactly zero") {
    auto s = build_linear_benchmark(50, 0.75, 2.0, 0.575, 0.125, 0.5, 0.5);
    s.disturbance = DisturbanceSignal::zero(2);
    std::fill(s.initial.begin(), s.initial.end(), 0.0);
    auto sim = s.simulation(1);
    const auto res = run(sim);
    for (double L : res.trace.L) CHECK(L == 0.0);
    for (const auto& st : res.history)
        for (double v : st.raw()) CHECK(v == 0.0);
}

TEST_CASE("run is linear in the initial data without disturbance") {
    testing::Gen gen(77);
    auto s = build_linear_benchmark(40, 0.9, 1.5, 0.575, 0.125, 0.5, 0.5);
    s.disturbance = DisturbanceSignal::zero(2);
    const auto u = gen.vec(s.initial.size());
    const auto v = gen.vec(s.initial.size());
    const double a = 0.7, b = -1.9;
    std::vector<double> w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = a * u[i] + b * v[i];
    auto run_with = [&](const std::vector<double>& init) {
        auto sc = s;
        sc.initial = init;
        return run(sc.simulation()).final_state;
    };
    const auto ru = run_with(u), rv = run_with(v), rw = run_with(w);
    for (std::size_t i = 0; i < rw.raw().size(); ++i) {
        const double expect = a * ru.raw()[i] + b * rv.raw()[i];
        CHECK_THAT(rw.raw()[i], WithinAbs(expect, 1e-10 * std::max(1.0, std::abs(expect))));
    }
}

TEST_CASE("unit Courant number gives exact advection over 100 steps") {
    const auto g = build_grid(1.0, 64, 100.0 / 64, 1.0, 1.0);
    const auto c = constant_system(g, 1.0, -1.0, Matrix(2, 2), boundary_2x2(0.0, 0.0, 0.0, 0.0));
    testing::Gen gen(9);
    const auto init = gen.vec(128);
    SimulationRun sim{g, c, WeightField::exponential({{1.0}, {1.0}, 0.5}, g), DisturbanceSignal::zero(2), init, 1, {}};
    const auto res = run(sim);
    REQUIRE(g.N == 100);
    for (std::size_t n = 1; n < res.history.size(); ++n) {
        const auto& prev = res.history[n - 1];
        const auto& cur = res.history[n];
        for (int j = 0; j < 64; ++j) {
            CHECK(cur(j, 0) == prev(j - 1, 0));
            CHECK(cur(j, 1) == prev(j + 1, 1));
        }
    }
}

TEST_CASE("run records levels 0..N and calls the hook") {
    auto s = build_linear_benchmark(20, 0.75, 1.0, 0.575, 0.125, 0.5, 0.5);
    int calls = 0;
    auto sim = s.simulation(5);
    sim.on_step = [&](const StateField& st) {
        CHECK(st.n == calls);
        ++calls;
    };
    const auto res = run(sim);
    CHECK(calls == s.grid.N + 1);
    CHECK(res.trace.size() == static_cast<std::size_t>(s.grid.N + 1));
    CHECK(res.trace.t.back() == 1.0);
    CHECK(res.history.size() == static_cast<std::size_t>(s.grid.N / 5 + 1));
    for (std::size_t n = 1; n < res.trace.size(); ++n) CHECK(res.trace.sup_b_sq[n] >= res.trace.sup_b_sq[n - 1]);
    CHECK(res.trace.sup_b_sq[0] == 0.0);
    CHECK(res.trace.sup_b_sq[1] == 0.0);  // b^1 has not driven a step yet
}

TEST_CASE("sup entry n is the max over the disturbances b^1..b^{n-1}") {
    auto s = build_linear_benchmark(20, 0.75, 1.0, 0.575, 0.125, 0.5, 0.5);
    const auto res = run(s.simulation());
    double sup = 0.0;
    for (int n = 2; n <= s.grid.N; ++n) {
        sup = std::max(sup, squared_norm(s.disturbance(s.grid.t(n - 1))));
        CHECK(res.trace.sup_b_sq[static_cast<std::size_t>(n)] == sup);
    }
}

TEST_CASE("non-finite values abort with the step index") {
    const auto g = build_grid(1.0, 4, 10.0, 1.0, 1.0);
    const double huge = 1e200;
    const auto c = constant_system(g, 1.0, -1.0, Matrix{{-huge, 0.0}, {0.0, -huge}}, boundary_2x2(0, 0, 0, 0));
    SimulationRun sim{g, c, WeightField::exponential({{1.0}, {1.0}, 0.5}, g), DisturbanceSignal::zero(2),
                      std::vector<double>(8, 1.0), 0, {}};
    try {
        run(sim);
        FAIL("expected an abort");
    } catch (const SimulationError& e) {
        CHECK(e.step() >= 1);
        CHECK(e.step() <= 4);
    }
}

TEST_CASE("discrete ISS bound with the certified constants") {
    // dx sum|W^{n+1}|^2 <= C1 e^{-eta t} dx sum|W^0|^2 + (C2/eta)(1 + 1/xi) sup|b|^2
    testing::Gen gen(31);
    for (int draw = 0; draw < 5; ++draw) {
        const double mu = gen.uniform(0.2, 1.0);
        const double xi = gen.uniform(0.05, 0.5);
        auto s = build_linear_benchmark(gen.integer(20, 80), gen.uniform(0.5, 1.0), 6.0, mu, xi, 0.0, 0.0);
        const auto probe = certify(s.coefficients, s.weights, s.grid, xi);
        const double k12 = gen.uniform(-0.95, 0.95) * *probe.c3.kappa12_bound;
        const double k21 = gen.uniform(-0.95, 0.95) * *probe.c3.kappa21_bound;
        s = build_linear_benchmark(s.grid.J, s.grid.cfl, 6.0, mu, xi, k12, k21);
        s.initial = gen.vec(s.initial.size());
        const auto r = certify(s.coefficients, s.weights, s.grid, xi);
        REQUIRE(r.overall);
        const auto res = run(s.simulation());
        const double E0 = res.trace.energy.front();
        for (std::size_t n = 0; n < res.trace.size(); ++n) {
            const double bound = r.C1 * std::exp(-r.eta * res.trace.t[n]) * E0 +
                                 r.C2 / r.eta * (1.0 + 1.0 / xi) * res.trace.sup_b_sq[n];
            CHECK(res.trace.energy[n] <= bound * (1.0 + 1e-12));
        }
    }
}
