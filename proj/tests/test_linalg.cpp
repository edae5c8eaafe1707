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

#include "catch_amalgamated.hpp"
#include "hypiss/linalg.hpp"
#include "support.hpp"

using namespace hypiss;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("identity has unit eigenvalues") {
    const auto ev = sym_eigenvalues(Matrix::identity(2));
    CHECK(ev == std::vector<double>{1.0, 1.0});
    const auto ev3 = sym_eigenvalues(Matrix::identity(4));
    for (double v : ev3) CHECK_THAT(v, WithinAbs(1.0, 1e-15));
}

TEST_CASE("2x2 example by characteristic polynomial") {
    // (0.6 - s)^2 - 0.04 = 0  =>  s = 0.4, 0.8
    const auto ev = sym_eigenvalues(Matrix{{0.6, -0.2}, {-0.2, 0.6}});
    CHECK_THAT(ev[0], WithinAbs(0.4, 1e-15));
    CHECK_THAT(ev[1], WithinAbs(0.8, 1e-15));
}

TEST_CASE("diagonal input comes back sorted") {
    const std::vector<double> d{3.0, -1.0, 2.0};
    const auto ev = sym_eigenvalues(Matrix::diagonal(d));
    CHECK(ev == std::vector<double>{-1.0, 2.0, 3.0});
}

TEST_CASE("closed form agrees with the discriminant formula") {
    testing::Gen g(11);
    for (int i = 0; i < 500; ++i) {
        const double a = g.uniform(-2, 2), b = g.uniform(-2, 2), c = g.uniform(-2, 2);
        const double tr = a + c, det = a * c - b * b;
        const double disc = std::sqrt(tr * tr - 4.0 * det);
        const auto ev = sym_eigen_2x2(a, b, c);
        CHECK_THAT(ev[0], WithinAbs(0.5 * (tr - disc), 1e-12));
        CHECK_THAT(ev[1], WithinAbs(0.5 * (tr + disc), 1e-12));
    }
}

TEST_CASE("Jacobi agrees with the 2x2 closed form") {
    testing::Gen g(12);
    for (int i = 0; i < 500; ++i) {
        const Matrix m = g.symmetric(2);
        const auto closed = sym_eigen_2x2(m(0, 0), m(0, 1), m(1, 1));
        const auto jac = jacobi_eigenvalues(m);
        CHECK_THAT(jac[0], WithinAbs(closed[0], 1e-12));
        CHECK_THAT(jac[1], WithinAbs(closed[1], 1e-12));
    }
}

TEST_CASE("Jacobi preserves trace and Frobenius norm") {
    testing::Gen g(13);
    for (int n = 3; n <= 6; ++n) {
        const Matrix m = g.symmetric(static_cast<std::size_t>(n));
        const auto ev = jacobi_eigenvalues(m);
        double tr = 0.0, fro = 0.0, s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) tr += m(i, i);
        for (double v : m.data()) fro += v * v;
        for (double v : ev) {
            s1 += v;
            s2 += v * v;
        }
        CHECK_THAT(s1, WithinAbs(tr, 1e-12));
        CHECK_THAT(s2, WithinAbs(fro, 1e-11));
        CHECK(std::is_sorted(ev.begin(), ev.end()));
    }
}

TEST_CASE("Jacobi reports non-convergence") {
    CHECK_THROWS_AS(jacobi_eigenvalues(Matrix{{1.0, 0.5, 0.2}, {0.5, 2.0, 0.1}, {0.2, 0.1, 3.0}}, 0), EigenError);
}

TEST_CASE("Matrix arithmetic and shape errors") {
    const Matrix a{{1.0, 2.0}, {3.0, 4.0}};
    const Matrix b = a * Matrix::identity(2);
    CHECK((a - b).max_abs() == 0.0);
    CHECK(a.transposed()(0, 1) == 3.0);
    const std::vector<double> x{1.0, 1.0};
    CHECK(a.apply(x) == std::vector<double>{3.0, 7.0});
    CHECK(a.bilinear(x, x) == 10.0);
    CHECK_THROWS(a * Matrix(3, 3));
    CHECK_THROWS(a + Matrix(3, 3));
    CHECK_THROWS(Matrix{{1.0, 2.0}, {3.0}});
}

// Quadratic identity: -2 y^T A (y - z) = -y^T A y + z^T A z - (y - z)^T A (y - z)
// holds for symmetric A; for a general A it holds for its symmetric part.
TEST_CASE("quadratic identity over random draws") {
    testing::Gen g(2024);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto n = static_cast<std::size_t>(g.integer(1, 5));
        const Matrix A = g.matrix(n, -3.0, 3.0).symmetrized();
        const auto y = g.vec(n, -5.0, 5.0);
        const auto z = g.vec(n, -5.0, 5.0);
        std::vector<double> d(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = y[k] - z[k];
        const double lhs = -2.0 * A.bilinear(y, d);
        const double rhs = -A.bilinear(y, y) + A.bilinear(z, z) - A.bilinear(d, d);
        const double scale = std::max({1.0, std::abs(A.bilinear(y, y)), std::abs(A.bilinear(z, z)),
                                       std::abs(A.bilinear(d, d))});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    CHECK(worst <= 1e-12);
}

// Young-type bound: +-2 y^T B z <= xi y^T B y + (1/xi) z^T B z for PSD B.
TEST_CASE("Young inequality over random PSD draws") {
    testing::Gen g(2025);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto n = static_cast<std::size_t>(g.integer(1, 5));
        const Matrix B = g.psd(n);
        const auto y = g.vec(n, -5.0, 5.0);
        const auto z = g.vec(n, -5.0, 5.0);
        const double xi = std::exp(g.uniform(-5.0, 5.0));
        const double cross = 2.0 * B.bilinear(y, z);
        const double bound = xi * B.bilinear(y, y) + B.bilinear(z, z) / xi;
        const double slack = 1e-12 * std::max(1.0, bound);
        if (cross > bound + slack || -cross > bound + slack) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("quadratic identity needs a symmetric matrix") {
    // y^T A z != z^T A y breaks the identity; the scheme only applies it to diagonal weights.
    const Matrix A{{0.0, 1.0}, {0.0, 0.0}};
    const std::vector<double> y{1.0, 0.0}, z{0.0, 1.0}, d{1.0, -1.0};
    const double lhs = -2.0 * A.bilinear(y, d);
    const double rhs = -A.bilinear(y, y) + A.bilinear(z, z) - A.bilinear(d, d);
    CHECK(lhs == 2.0);
    CHECK(rhs == 1.0);
}
