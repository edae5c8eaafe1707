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
#include <optional>
#include <string>
#include <vector>

#include "hypiss/coefficients.hpp"
#include "hypiss/grid.hpp"
#include "hypiss/linalg.hpp"
#include "hypiss/weights.hpp"

namespace hypiss {

/// Eigenvalue >= -psd_relative_tol * max|entry| counts as positive semi-definite.
inline constexpr double psd_relative_tol = 1e-10;
/// Positive definiteness needs every eigenvalue (here: diagonal entry) above this.
inline constexpr double pd_absolute_tol = 1e-12;

/// First offending item of a failed condition.
struct Witness {
    std::string condition;  // "C1", "C2", "C3", "CFL", "gronwall"
    int j = -1;             // cell index, -1 when not cell-specific
    int component = -1;     // diagonal component for C1 / C3
    double value = 0.0;     // offending eigenvalue or entry
    std::string detail;
};

/// Transport condition: Theta_j is diagonal, one entry per component.
struct ThetaReport {
    bool pass = false;
    std::vector<double> theta;  // J * k entries, cell-major
    double eta_theta = 0.0;     // min_j,i Theta_j[i] / P_j[i]
    double eta = 0.0;           // certified decay rate
    bool eta_from_exponential_bound = false;
    std::optional<Witness> witness;
};

/// Source condition: eigenvalues of P Pi + Pi^T P - dt Pi^T P Pi per cell.
struct SourceReport {
    bool pass = false;
    std::vector<double> sigma_minus;  // smallest eigenvalue per cell
    std::vector<double> sigma_plus;   // largest eigenvalue per cell
    double min_eigenvalue = std::numeric_limits<double>::infinity();
    std::optional<Witness> witness;
};

/// Boundary condition: B_c positive semi-definite.
struct BoundaryReport {
    bool pass = false;
    Matrix B;
    std::vector<double> eigenvalues;
    std::optional<double> kappa12_bound;  // k = 2 closed forms
    std::optional<double> kappa21_bound;
    std::optional<Witness> witness;
};

struct CertificateReport {
    ThetaReport c1;
    SourceReport c2;
    BoundaryReport c3;
    double eta = 0.0;
    double nu = 0.0;
    double xi = 0.0;
    double dt = 0.0;
    double zeta = 0.0;  // smallest interior weight
    double beta = 0.0;  // largest interior weight
    double C1 = 0.0;    // beta / zeta
    double C2 = 0.0;    // nu / zeta
    bool gronwall_ok = false;  // eta * dt < 1
    bool overall = false;
    std::optional<Witness> first_failure;
};

/// Theta_j for j = 0..J-1, with Lambda- taken as magnitudes:
///   +: -Lambda+_{j-1} (P+_{j+1} - P+_j)/dx - (Lambda+_j - Lambda+_{j-1})/dx P+_{j+1}
///   -:  Lambda-_{j+1} (P-_j - P-_{j-1})/dx + (Lambda-_{j+1} - Lambda-_j)/dx P-_{j-1}
///
/// eta_theta is the largest eta with W^T Theta_j W >= eta W^T P_j W. For the
/// exponential weights the certified eta additionally replaces the factor
/// (1 - e^{-mu dx})/dx by its lower bound mu e^{-mu dx}; with constant speeds
/// this gives eta = mu * min|lambda| * e^{-mu dx}.
inline ThetaReport check_theta(const SystemCoefficients& coeffs, const WeightField& weights, const Grid1D& grid) {
    const int k = coeffs.k();
    const int m = coeffs.m();
    const int J = coeffs.J();
    const double dx = grid.dx;
    ThetaReport r;
    r.theta.resize(static_cast<std::size_t>(J * k));
    r.eta_theta = std::numeric_limits<double>::infinity();
    double eta_bound = std::numeric_limits<double>::infinity();

    const auto& implicit = weights.implicit_params();
    const double mu = implicit ? implicit->mu : 0.0;
    const double decay = implicit ? std::exp(-mu * dx) : 0.0;

    r.pass = true;
    for (int j = 0; j < J; ++j) {
        for (int i = 0; i < k; ++i) {
            double th;
            double bound = 0.0;
            if (i < m) {
                const double lm = coeffs.speed(j - 1, i);
                const double l0 = coeffs.speed(j, i);
                th = -lm * (weights.p(j + 1, i) - weights.p(j, i)) / dx - (l0 - lm) / dx * weights.p(j + 1, i);
                if (implicit) bound = decay * (mu * lm - (l0 - lm) / dx);
            } else {
                const double lp = coeffs.speed(j + 1, i);
                const double l0 = coeffs.speed(j, i);
                th = lp * (weights.p(j, i) - weights.p(j - 1, i)) / dx + (lp - l0) / dx * weights.p(j - 1, i);
                if (implicit) bound = decay * (mu * lp + (lp - l0) / dx);
            }
            r.theta[static_cast<std::size_t>(j * k + i)] = th;
            r.eta_theta = std::min(r.eta_theta, th / weights.p(j, i));
            eta_bound = std::min(eta_bound, bound);
            if (!(th > pd_absolute_tol) && r.pass) {
                r.pass = false;
                r.witness = Witness{"C1", j, i, th, "Theta_j diagonal entry is not positive"};
            }
        }
    }
    if (implicit && eta_bound > 0.0) {
        r.eta = eta_bound;
        r.eta_from_exponential_bound = true;
    } else {
        r.eta = r.eta_theta;
    }
    return r;
}

/// Source matrix P_j Pi_j + Pi_j^T P_j - dt Pi_j^T P_j Pi_j.
inline Matrix source_matrix(const Matrix& pi, const WeightField& weights, int j, double dt) {
    std::vector<double> d(static_cast<std::size_t>(weights.k()));
    for (int i = 0; i < weights.k(); ++i) d[static_cast<std::size_t>(i)] = weights.p(j, i);
    const Matrix P = Matrix::diagonal(d);
    const Matrix pit = pi.transposed();
    return P * pi + pit * P - dt * (pit * P * pi);
}

/// Entries (M11, M12, M22) of the 2x2 source matrix, expanded by hand.
struct SourceEntries2x2 {
    double m11, m12, m22;
};

inline SourceEntries2x2 source_entries_2x2(const Matrix& g, double p1, double p2, double dt) {
    const double g11 = g(0, 0), g12 = g(0, 1), g21 = g(1, 0), g22 = g(1, 1);
    return {
        2.0 * g11 * p1 - dt * (g11 * g11 * p1 + g21 * g21 * p2),
        g21 * p2 + g12 * p1 - dt * (g11 * g12 * p1 + g21 * g22 * p2),
        2.0 * g22 * p2 - dt * (g12 * g12 * p1 + g22 * g22 * p2),
    };
}

inline SourceReport check_source(const SystemCoefficients& coeffs, const WeightField& weights, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("check_source: dt must be positive");
    const int k = coeffs.k();
    const int J = coeffs.J();
    SourceReport r;
    r.pass = true;
    r.sigma_minus.resize(static_cast<std::size_t>(J));
    r.sigma_plus.resize(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) {
        const Matrix Mj = source_matrix(coeffs.pi(j), weights, j, dt);
        const double scale = Mj.max_abs();
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b) {
                const double asym = std::abs(Mj(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) -
                                             Mj(static_cast<std::size_t>(b), static_cast<std::size_t>(a)));
                if (asym > 1e-12 * std::max(1.0, scale))
                    throw std::logic_error("check_source: source matrix is not symmetric at j=" + std::to_string(j));
            }
        std::vector<double> ev;
        if (k == 2) {
            const auto e = source_entries_2x2(coeffs.pi(j), weights.p(j, 0), weights.p(j, 1), dt);
            ev = sym_eigen_2x2(e.m11, e.m12, e.m22);
        } else {
            ev = sym_eigenvalues(Mj);
        }
        r.sigma_minus[static_cast<std::size_t>(j)] = ev.front();
        r.sigma_plus[static_cast<std::size_t>(j)] = ev.back();
        r.min_eigenvalue = std::min(r.min_eigenvalue, ev.front());
        if (ev.front() < -psd_relative_tol * scale && r.pass) {
            r.pass = false;
            r.witness = Witness{"C2", j, -1, ev.front(), "source matrix has a negative eigenvalue"};
        }
    }
    return r;
}

namespace detail {

/// diag{Lambda+_{J-1} P+_J, |Lambda-_0| P-_{-1}}: outgoing boundary weights.
inline std::vector<double> outgoing_weights(const SystemCoefficients& c, const WeightField& w) {
    const int J = c.J();
    std::vector<double> d(static_cast<std::size_t>(c.k()));
    for (int i = 0; i < c.k(); ++i)
        d[static_cast<std::size_t>(i)] = i < c.m() ? c.speed(J - 1, i) * w.p(J, i) : c.speed(0, i) * w.p(-1, i);
    return d;
}

/// diag{Lambda+_{-1} P+_0, |Lambda-_J| P-_{J-1}}: incoming boundary weights.
inline std::vector<double> incoming_weights(const SystemCoefficients& c, const WeightField& w) {
    const int J = c.J();
    std::vector<double> d(static_cast<std::size_t>(c.k()));
    for (int i = 0; i < c.k(); ++i)
        d[static_cast<std::size_t>(i)] = i < c.m() ? c.speed(-1, i) * w.p(0, i) : c.speed(J, i) * w.p(J - 1, i);
    return d;
}

}  // namespace detail

/// B_c = diag(outgoing) - (1 + xi) K^T diag(incoming) K must be PSD.
inline BoundaryReport check_boundary(const SystemCoefficients& coeffs, const WeightField& weights, double xi) {
    if (!(xi > 0.0)) throw std::invalid_argument("check_boundary: xi must be positive");
    const auto out = detail::outgoing_weights(coeffs, weights);
    const auto in = detail::incoming_weights(coeffs, weights);
    const Matrix& K = coeffs.K();
    BoundaryReport r;
    r.B = Matrix::diagonal(out) - (1.0 + xi) * (K.transposed() * Matrix::diagonal(in) * K);
    r.eigenvalues = sym_eigenvalues(r.B);
    const double scale = r.B.max_abs();
    r.pass = r.eigenvalues.front() >= -psd_relative_tol * scale;
    if (!r.pass) r.witness = Witness{"C3", -1, -1, r.eigenvalues.front(), "boundary matrix has a negative eigenvalue"};
    if (coeffs.k() == 2 && coeffs.m() == 1) {
        // Columns of K pick the outgoing slot: kappa12 feeds W+_{-1}, kappa21 feeds W-_J.
        r.kappa12_bound = std::sqrt(out[1] / ((1.0 + xi) * in[0]));
        r.kappa21_bound = std::sqrt(out[0] / ((1.0 + xi) * in[1]));
    }
    return r;
}

/// Largest eigenvalue of M^T diag(incoming) M.
inline double compute_nu(const SystemCoefficients& coeffs, const WeightField& weights) {
    const auto in = detail::incoming_weights(coeffs, weights);
    const Matrix& M = coeffs.M();
    const Matrix A = M.transposed() * Matrix::diagonal(in) * M;
    return sym_eigenvalues(A).back();
}

/// Runs all three checks and assembles eta, nu, C1 = beta/zeta, C2 = nu/zeta.
/// The report is complete even when a check fails.
inline CertificateReport certify(const SystemCoefficients& coeffs, const WeightField& weights, const Grid1D& grid,
                                 double xi) {
    CertificateReport r;
    r.xi = xi;
    r.dt = grid.dt;
    r.c1 = check_theta(coeffs, weights, grid);
    r.c2 = check_source(coeffs, weights, grid.dt);
    r.c3 = check_boundary(coeffs, weights, xi);
    r.eta = r.c1.eta;
    r.nu = compute_nu(coeffs, weights);
    r.zeta = weights.min_interior();
    r.beta = weights.max_interior();
    r.C1 = r.beta / r.zeta;
    r.C2 = r.nu / r.zeta;
    r.gronwall_ok = r.eta > 0.0 && r.eta * grid.dt < 1.0;

    const bool cfl_ok = grid.dt * coeffs.max_speed() / grid.dx <= 1.0 + 1e-9;
    if (!r.c1.pass) r.first_failure = r.c1.witness;
    else if (!r.c2.pass) r.first_failure = r.c2.witness;
    else if (!r.c3.pass) r.first_failure = r.c3.witness;
    else if (!cfl_ok) r.first_failure = Witness{"CFL", -1, -1, grid.dt * coeffs.max_speed() / grid.dx, "Courant number above one"};
    else if (!r.gronwall_ok) r.first_failure = Witness{"gronwall", -1, -1, r.eta * grid.dt, "eta*dt must lie in (0, 1)"};
    r.overall = r.c1.pass && r.c2.pass && r.c3.pass && cfl_ok && r.gronwall_ok;
    return r;
}

/// One row of the xi trade-off: kappa bounds, nu and the envelope gain.
struct XiSweepRow {
    double xi = 0.0;
    double kappa12_bound = 0.0;
    double kappa21_bound = 0.0;
    double nu = 0.0;
    double eta = 0.0;
    double envelope_gain = 0.0;  // (1 + 1/xi) nu / eta
    bool boundary_pass = false;
};

inline XiSweepRow sweep_point(const SystemCoefficients& coeffs, const WeightField& weights, const Grid1D& grid,
                              double xi) {
    XiSweepRow row;
    row.xi = xi;
    const auto c3 = check_boundary(coeffs, weights, xi);
    row.kappa12_bound = c3.kappa12_bound.value_or(std::numeric_limits<double>::quiet_NaN());
    row.kappa21_bound = c3.kappa21_bound.value_or(std::numeric_limits<double>::quiet_NaN());
    row.boundary_pass = c3.pass;
    row.nu = compute_nu(coeffs, weights);
    row.eta = check_theta(coeffs, weights, grid).eta;
    row.envelope_gain = (1.0 + 1.0 / xi) * row.nu / row.eta;
    return row;
}

/// Pointwise check of the continuous conditions on the grid samples, using
/// centered differences of the sampled speeds and weights. Reported only;
/// it does not enter the discrete verdict.
struct SampledContinuousCheck {
    double min_interior_eigenvalue = 0.0;  // min over j of lambda_min(Q(x_j))
    double min_boundary_eigenvalue = 0.0;
    bool interior_pass = false;
    bool boundary_pass = false;
};

inline SampledContinuousCheck sampled_continuous_check(const SystemCoefficients& coeffs, const WeightField& weights,
                                                       const Grid1D& grid, double xi) {
    const int k = coeffs.k();
    const int J = coeffs.J();
    const double dx = grid.dx;
    SampledContinuousCheck r;
    r.min_interior_eigenvalue = std::numeric_limits<double>::infinity();
    for (int j = 0; j < J; ++j) {
        Matrix Q(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
        std::vector<double> p(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const double lam = coeffs.lambda(j, i);
            const double dlam = (coeffs.lambda(j + 1, i) - coeffs.lambda(j - 1, i)) / (2.0 * dx);
            const double dp = (weights.p(j + 1, i) - weights.p(j - 1, i)) / (2.0 * dx);
            Q(ii, ii) = -lam * dp - dlam * weights.p(j, i);
            p[ii] = weights.p(j, i);
        }
        const Matrix P = Matrix::diagonal(p);
        Q = Q + coeffs.pi(j).transposed() * P + P * coeffs.pi(j);
        r.min_interior_eigenvalue = std::min(r.min_interior_eigenvalue, sym_eigenvalues(Q).front());
    }
    r.interior_pass = r.min_interior_eigenvalue > pd_absolute_tol;

    // Boundary values as the average of the ghost and the adjacent cell sample.
    auto at0 = [&](int i) { return 0.5 * (coeffs.speed(-1, i) * weights.p(-1, i) + coeffs.speed(0, i) * weights.p(0, i)); };
    auto atl = [&](int i) {
        return 0.5 * (coeffs.speed(J, i) * weights.p(J, i) + coeffs.speed(J - 1, i) * weights.p(J - 1, i));
    };
    std::vector<double> out(static_cast<std::size_t>(k)), in(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        out[static_cast<std::size_t>(i)] = i < coeffs.m() ? atl(i) : at0(i);
        in[static_cast<std::size_t>(i)] = i < coeffs.m() ? at0(i) : atl(i);
    }
    const Matrix& K = coeffs.K();
    const Matrix B = Matrix::diagonal(out) - (1.0 + xi) * (K.transposed() * Matrix::diagonal(in) * K);
    r.min_boundary_eigenvalue = sym_eigenvalues(B).front();
    r.boundary_pass = r.min_boundary_eigenvalue >= -psd_relative_tol * B.max_abs();
    return r;
}

}  // namespace hypiss
