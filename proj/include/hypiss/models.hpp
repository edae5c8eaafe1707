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

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypiss/coefficients.hpp"
#include "hypiss/disturbance.hpp"
#include "hypiss/grid.hpp"
#include "hypiss/lambert_w.hpp"
#include "hypiss/linalg.hpp"
#include "hypiss/solver.hpp"
#include "hypiss/weights.hpp"

namespace hypiss {

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Initial profile W^0(x) in R^k.
using ProfileFunction = std::function<std::vector<double>(double x)>;

/// A fully assembled experiment: mesh, sampled coefficients, weights,
/// disturbance, interior initial data and the splitting parameter xi.
struct Scenario {
    std::string name;
    std::string model;
    Grid1D grid;
    SystemCoefficients coefficients;
    WeightField weights;
    DisturbanceSignal disturbance;
    std::vector<double> initial;  // interior cells, cell-major
    double xi = 0.125;
    std::vector<std::string> notes;

    SimulationRun simulation(int history_stride = 0) const {
        return SimulationRun{grid, coefficients, weights, disturbance, initial, history_stride, {}};
    }
};

/// Samples a profile at the interior centers x_0..x_{J-1}.
inline std::vector<double> sample_profile(const ProfileFunction& f, const Grid1D& grid, int k) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(grid.J * k));
    for (int j = 0; j < grid.J; ++j) {
        const auto v = f(grid.x(j));
        if (static_cast<int>(v.size()) != k) throw ModelError("sample_profile: profile has the wrong dimension");
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constant 2x2 benchmark

/// The 2x2 system with Lambda = diag(1, -1), Pi = [[0.3, -0.1], [-0.1, 0.3]],
/// M = I, W^0 = (-0.5, 0.5), b1 = -b2 = 0.01 sin^2(pi t) on [0, 5), and
/// exponential weights with p1 = p2 = 1 on [0, 1].
inline Scenario build_linear_benchmark(int J, double cfl, double T, double mu, double xi, double kappa12,
                                       double kappa21) {
    Scenario s;
    s.name = "linear2x2";
    s.model = "linear2x2";
    s.grid = build_grid(1.0, J, T, cfl, 1.0);
    const SpeedFunction lambda = [](double) { return std::vector<double>{1.0, -1.0}; };
    const SourceFunction pi = [](double) { return Matrix{{0.3, -0.1}, {-0.1, 0.3}}; };
    s.coefficients = sample_coefficients(lambda, pi, s.grid, boundary_2x2(kappa12, kappa21, 1.0, 1.0));
    s.weights = WeightField::exponential({{1.0}, {1.0}, mu}, s.grid);
    s.disturbance = DisturbanceSignal::switched_sine_squared({1.0, -1.0});
    s.initial = sample_profile([](double) { return std::vector<double>{-0.5, 0.5}; }, s.grid, 2);
    s.xi = xi;
    return s;
}

// ---------------------------------------------------------------------------
// Saint-Venant

struct SaintVenantParams {
    double g = 9.81;
    double Cf = 0.1;
    double Sb = 0.0459;
    double l = 1.0;
    std::function<double(double)> Hstar = [](double) { return 2.0; };
    std::function<double(double)> Vstar = [](double) { return 3.0; };
    double k0 = 0.0;
    double kl = 0.0;
};

/// lambda_{1,2} = V* +- sqrt(g H*).
inline std::array<double, 2> saint_venant_speeds(const SaintVenantParams& p, double x) {
    const double H = p.Hstar(x);
    const double V = p.Vstar(x);
    if (!(H > 0.0)) throw ModelError("saint_venant: equilibrium depth must be positive at x=" + std::to_string(x));
    if (!(V * V < p.g * H)) {
        std::ostringstream os;
        os << "saint_venant: equilibrium is not sub-critical at x=" << x << " (V*^2 = " << V * V
           << ", g H* = " << p.g * H << ")";
        throw ModelError(os.str());
    }
    const double c = std::sqrt(p.g * H);
    return {V + c, V - c};
}

/// Source coefficients from the equilibrium (H*, V*).
inline Matrix saint_venant_gamma(const SaintVenantParams& p, double x) {
    const double H = p.Hstar(x);
    const double V = p.Vstar(x);
    if (V == 0.0) throw ModelError("saint_venant: source formulas need V* != 0");
    const auto lam = saint_venant_speeds(p, x);
    const double c = std::sqrt(p.g * H);
    const double slope = p.g / H * (p.Sb * H - p.Cf * V * V);
    const double fr = p.g * p.Cf * V * V / (2.0 * H);
    return Matrix{
        {0.75 * slope / lam[0] + fr * (2.0 / V - 1.0 / c), 0.25 * slope / lam[0] + fr * (2.0 / V + 1.0 / c)},
        {0.25 * slope / lam[1] + fr * (2.0 / V - 1.0 / c), 0.75 * slope / lam[1] + fr * (2.0 / V + 1.0 / c)},
    };
}

/// (H, V) -> (w1, w2) = (V - V* +- (H - H*) sqrt(g / H*)).
inline std::array<double, 2> saint_venant_to_characteristic(double H, double V, double Hs, double Vs, double g) {
    const double s = std::sqrt(g / Hs);
    return {V - Vs + (H - Hs) * s, V - Vs - (H - Hs) * s};
}

/// Inverse of saint_venant_to_characteristic.
inline std::array<double, 2> saint_venant_from_characteristic(double w1, double w2, double Hs, double Vs, double g) {
    const double s = std::sqrt(g / Hs);
    return {Hs + (w1 - w2) / (2.0 * s), Vs + 0.5 * (w1 + w2)};
}

/// kappa = (k sqrt(H*/g) - 1) / (1 + k sqrt(H*/g)) at one end of the channel.
inline double saint_venant_kappa(double k, double Hs, double g) {
    const double r = k * std::sqrt(Hs / g);
    if (1.0 + r == 0.0) throw ModelError("saint_venant: boundary gain makes kappa singular");
    return (r - 1.0) / (1.0 + r);
}

struct SaintVenantOptions {
    std::optional<Matrix> gamma_override;
    std::optional<std::pair<double, double>> kappa_override;  // (kappa12, kappa21)
};

struct SaintVenantModel {
    SystemCoefficients coefficients;
    double kappa12 = 0.0;
    double kappa21 = 0.0;
    /// Largest |formula - override| over interior cells; empty without override
    /// or when the formulas cannot be evaluated.
    std::optional<double> gamma_deviation;
};

/// Characteristic form of the linearized Saint-Venant system. The boundary
/// map uses kappa from (k0, kl) unless overridden, and m = 1 - kappa.
inline SaintVenantModel linearize_saint_venant(const SaintVenantParams& p, const Grid1D& grid,
                                               const SaintVenantOptions& opt = {}) {
    SaintVenantModel out;
    if (opt.kappa_override) {
        out.kappa12 = opt.kappa_override->first;
        out.kappa21 = opt.kappa_override->second;
    } else {
        out.kappa12 = saint_venant_kappa(p.k0, p.Hstar(0.0), p.g);
        out.kappa21 = saint_venant_kappa(p.kl, p.Hstar(p.l), p.g);
    }
    if (out.kappa12 == 1.0 || out.kappa21 == 1.0) throw ModelError("saint_venant: kappa = 1 is excluded");

    const SpeedFunction lambda = [&p](double x) {
        const auto l = saint_venant_speeds(p, x);
        return std::vector<double>{l[0], l[1]};
    };
    SourceFunction pi;
    if (opt.gamma_override) {
        const Matrix g = *opt.gamma_override;
        if (g.rows() != 2 || g.cols() != 2) throw ModelError("saint_venant: gamma override must be 2x2");
        pi = [g](double) { return g; };
        try {
            double dev = 0.0;
            for (int j = 0; j < grid.J; ++j) {
                const Matrix f = saint_venant_gamma(p, grid.x(j));
                dev = std::max(dev, (f - g).max_abs());
            }
            out.gamma_deviation = dev;
        } catch (const ModelError&) {
        }
    } else {
        pi = [&p](double x) { return saint_venant_gamma(p, x); };
    }
    const BoundaryMatrices bm = boundary_2x2(out.kappa12, out.kappa21, 1.0 - out.kappa12, 1.0 - out.kappa21);
    out.coefficients = sample_coefficients(lambda, pi, grid, bm);
    return out;
}

/// The channel flow example: H* = 2, V* = 3, H(x,0) = 2.5, V(x,0) = 4 sin(pi x),
/// source values and weights (p1, p2) = (0.0992, 0.2008), kappa12 = 0.5,
/// kappa21 = 1.5 e^{-mu}, b1 = -b2 = d(t).
inline Scenario build_saint_venant_example(double mu, int J = 1600, double cfl = 0.75, double T = 10.0,
                                           double xi = 0.125) {
    SaintVenantParams p;
    const double lmax = max_speed(
        [&p](double x) {
            const auto l = saint_venant_speeds(p, x);
            return std::vector<double>{l[0], l[1]};
        },
        p.l, J);
    Scenario s;
    s.name = "saint_venant";
    s.model = "saint_venant";
    s.grid = build_grid(p.l, J, T, cfl, lmax);
    SaintVenantOptions opt;
    opt.gamma_override = Matrix{{0.0992, 0.2008}, {0.0992, 0.2008}};
    opt.kappa_override = std::make_pair(0.5, 1.5 * std::exp(-mu));
    auto model = linearize_saint_venant(p, s.grid, opt);
    s.coefficients = std::move(model.coefficients);
    if (model.gamma_deviation && *model.gamma_deviation > 1e-6) {
        std::ostringstream os;
        os << "gamma override differs from the source formulas by up to " << *model.gamma_deviation;
        s.notes.push_back(os.str());
    }
    s.weights = WeightField::exponential({{0.0992}, {0.2008}, mu}, s.grid);
    s.disturbance = DisturbanceSignal::switched_sine_squared({1.0, -1.0});
    s.initial = sample_profile(
        [&p](double x) {
            const auto w = saint_venant_to_characteristic(2.5, 4.0 * std::sin(std::numbers::pi * x), p.Hstar(x),
                                                          p.Vstar(x), p.g);
            return std::vector<double>{w[0], w[1]};
        },
        s.grid, 2);
    s.xi = xi;
    return s;
}

// ---------------------------------------------------------------------------
// Isothermal Euler

struct EulerParams {
    double a = 1.0;         // sound speed
    double f_over_D = 1.0;  // friction ratio
    double q_star = 0.2;    // constant equilibrium flux
    double rho0 = 3.0;      // equilibrium density at x = 0
    double l = 1.0;
};

/// Equilibrium density solving (a^2 - q^2/rho^2) rho' = -(f/2D) q|q| / rho
/// with rho(0) = rho0 on the subsonic branch:
///   rho^2 = -s W_{-1}(z),  s = q^2/a^2,  ln(-z) = -ln s - K(x)/s,
///   K(x) = rho0^2 - s ln rho0^2 - (f/D) q|q| x / a^2.
/// The argument z is formed in log space since it underflows for small s.
inline double euler_rho_star(const EulerParams& p, double x) {
    if (!(p.a > 0.0) || !(p.rho0 > 0.0)) throw ModelError("isothermal_euler: a and rho0 must be positive");
    const double q = p.q_star;
    if (q == 0.0) return p.rho0;
    const double s = q * q / (p.a * p.a);
    if (!(p.rho0 * p.rho0 > s)) throw ModelError("isothermal_euler: rho0 is not subsonic (rho0 <= |q|/a)");
    const double K = p.rho0 * p.rho0 - s * std::log(p.rho0 * p.rho0) - p.f_over_D * q * std::abs(q) * x / (p.a * p.a);
    const double log_neg_z = -std::log(s) - K / s;
    if (!(log_neg_z <= -1.0)) {
        std::ostringstream os;
        os << "isothermal_euler: no subsonic equilibrium at x=" << x << " (flow chokes)";
        throw ModelError(os.str());
    }
    return std::sqrt(-s * lambert_w_minus1_log(log_neg_z));
}

/// lambda_{1,2} = q*/rho* +- a.
inline std::array<double, 2> euler_speeds(const EulerParams& p, double x) {
    const double u = p.q_star / euler_rho_star(p, x);
    return {u + p.a, u - p.a};
}

/// d/dx (q*/rho*) from the equilibrium ODE; both speeds share this derivative.
inline double euler_speed_derivative_exact(const EulerParams& p, double x) {
    const double rho = euler_rho_star(p, x);
    const double q = p.q_star;
    const double drho = -0.5 * p.f_over_D * q * std::abs(q) / rho / (p.a * p.a - q * q / (rho * rho));
    return -q * drho / (rho * rho);
}

/// Source coefficients of the linearized isothermal Euler system. Speed
/// derivatives are centered differences of step h on the closed-form rho*.
inline Matrix euler_gamma(const EulerParams& p, double x, double h) {
    const double a = p.a;
    const double q = p.q_star;
    const double rho = euler_rho_star(p, x);
    const auto lam = euler_speeds(p, x);
    const double l1 = lam[0], l2 = lam[1];
    const double d = (p.q_star / euler_rho_star(p, x + h) - p.q_star / euler_rho_star(p, x - h)) / (2.0 * h);
    const double dl1 = d, dl2 = d;
    const double A = l2 * dl1 + l1 * dl2 + p.f_over_D * q * q / (2.0 * rho * rho);
    const double B = 2.0 * q / (rho * rho) - p.f_over_D * q / rho;
    const double c = 1.0 / (2.0 * a);
    return Matrix{
        {-c * A - c * l1 * B + c * dl2, c * A + c * l2 * B - c * dl2},
        {-c * A - c * l1 * B + c * l1 * dl1, c * A + c * l2 * B - c * l2 * dl1},
    };
}

/// Samples speeds and sources of the isothermal Euler linearization.
inline SystemCoefficients linearize_euler(const EulerParams& p, const Grid1D& grid, BoundaryMatrices boundary) {
    const double h = grid.dx / 10.0;
    const SpeedFunction lambda = [&p](double x) {
        const auto l = euler_speeds(p, x);
        if (!(l[1] < 0.0 && l[0] > 0.0)) throw ModelError("isothermal_euler: need lambda2 < 0 < lambda1");
        return std::vector<double>{l[0], l[1]};
    };
    const SourceFunction pi = [&p, h](double x) { return euler_gamma(p, x, h); };
    return sample_coefficients(lambda, pi, grid, std::move(boundary));
}

/// The Euler example: rho*(0) = 3, q* = 0.2, a = 1, f/D = 1, W^0 = (cos 2 pi x,
/// cos 2 pi x), b1 = -b2 = d(t), kappa12 = kappa21 = 0.5 with m = 1 - kappa,
/// and weights p1 = p2 = 1.
inline Scenario build_euler_example(double mu = 0.575, int J = 1600, double cfl = 0.75, double T = 10.0,
                                    double xi = 0.125, double kappa12 = 0.5, double kappa21 = 0.5) {
    EulerParams p;
    const double lmax = max_speed(
        [&p](double x) {
            const auto l = euler_speeds(p, x);
            return std::vector<double>{l[0], l[1]};
        },
        p.l, J);
    Scenario s;
    s.name = "isothermal_euler";
    s.model = "isothermal_euler";
    s.grid = build_grid(p.l, J, T, cfl, lmax);
    s.coefficients = linearize_euler(p, s.grid, boundary_2x2(kappa12, kappa21, 1.0 - kappa12, 1.0 - kappa21));
    s.weights = WeightField::exponential({{1.0}, {1.0}, mu}, s.grid);
    s.disturbance = DisturbanceSignal::switched_sine_squared({1.0, -1.0});
    s.initial = sample_profile(
        [](double x) {
            const double c = std::cos(2.0 * std::numbers::pi * x);
            return std::vector<double>{c, c};
        },
        s.grid, 2);
    s.xi = xi;
    return s;
}

}  // namespace hypiss
