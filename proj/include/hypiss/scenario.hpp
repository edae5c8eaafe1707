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
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypiss/coefficients.hpp"
#include "hypiss/disturbance.hpp"
#include "hypiss/grid.hpp"
#include "hypiss/models.hpp"
#include "hypiss/weights.hpp"

namespace hypiss {

/// Invalid scenario description; `path` names the offending field, e.g. "grid.J".
class ScenarioError : public std::invalid_argument {
public:
    ScenarioError(std::string path, const std::string& message)
        : std::invalid_argument(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

using Json = nlohmann::json;

namespace detail {

inline std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

inline std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

inline const Json& require(const Json& obj, const std::string& base, const std::string& key) {
    if (!obj.is_object()) throw ScenarioError(base, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ScenarioError(join_path(base, key), "missing required field");
    return *it;
}

inline double as_number(const Json& v, const std::string& path) {
    if (!v.is_number()) throw ScenarioError(path, "expected a number, got " + std::string(v.type_name()));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(path, "number must be finite");
    return d;
}

inline double number(const Json& obj, const std::string& base, const std::string& key) {
    return as_number(require(obj, base, key), join_path(base, key));
}

inline double number_or(const Json& obj, const std::string& base, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    return as_number(obj.at(key), join_path(base, key));
}

inline int integer(const Json& obj, const std::string& base, const std::string& key) {
    const auto& v = require(obj, base, key);
    if (!v.is_number_integer()) throw ScenarioError(join_path(base, key), "expected an integer");
    return v.get<int>();
}

inline std::vector<double> vector_of(const Json& v, const std::string& path) {
    if (!v.is_array()) throw ScenarioError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], index_path(path, i)));
    return out;
}

inline Matrix matrix_of(const Json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw ScenarioError(path, "expected a nonempty array of rows");
    const std::size_t rows = v.size();
    Matrix m(rows, rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row = vector_of(v[r], index_path(path, r));
        if (row.size() != rows) throw ScenarioError(index_path(path, r), "matrix must be square");
        for (std::size_t c = 0; c < rows; ++c) m(r, c) = row[c];
    }
    return m;
}

/// Scalar profile offset + A sin(k pi x) + B cos(k pi x), a number, or a
/// table {"x": [...], "values": [...]} interpolated linearly.
inline std::function<double(double)> scalar_profile(const Json& v, const std::string& path) {
    if (v.is_number()) {
        const double c = as_number(v, path);
        return [c](double) { return c; };
    }
    if (!v.is_object()) throw ScenarioError(path, "expected a number or a profile object");
    if (v.contains("x") || v.contains("values")) {
        auto xs = vector_of(require(v, path, "x"), join_path(path, "x"));
        auto ys = vector_of(require(v, path, "values"), join_path(path, "values"));
        if (xs.size() != ys.size() || xs.empty()) throw ScenarioError(path, "x and values must match and be nonempty");
        if (!std::is_sorted(xs.begin(), xs.end())) throw ScenarioError(join_path(path, "x"), "must be nondecreasing");
        return [xs, ys](double x) {
            if (x <= xs.front()) return ys.front();
            if (x >= xs.back()) return ys.back();
            const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
            const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
            return (1.0 - w) * ys[hi - 1] + w * ys[hi];
        };
    }
    for (const auto& [key, _] : v.items())
        if (key != "offset" && key != "sin_amplitude" && key != "cos_amplitude" && key != "wavenumber")
            throw ScenarioError(join_path(path, key), "unknown profile key");
    const double c = number_or(v, path, "offset", 0.0);
    const double a = number_or(v, path, "sin_amplitude", 0.0);
    const double b = number_or(v, path, "cos_amplitude", 0.0);
    const double k = number_or(v, path, "wavenumber", 1.0);
    return [c, a, b, k](double x) {
        const double arg = k * std::numbers::pi * x;
        return c + a * std::sin(arg) + b * std::cos(arg);
    };
}

inline ProfileFunction vector_profile(const Json& v, const std::string& path, int k) {
    if (!v.is_array() || static_cast<int>(v.size()) != k)
        throw ScenarioError(path, "expected an array of " + std::to_string(k) + " component profiles");
    std::vector<std::function<double(double)>> parts;
    for (std::size_t i = 0; i < v.size(); ++i) parts.push_back(scalar_profile(v[i], index_path(path, i)));
    return [parts](double x) {
        std::vector<double> w;
        for (const auto& f : parts) w.push_back(f(x));
        return w;
    };
}

/// kappa entry: a number or {"value": v, "scale": "exp(-mu)"} meaning v e^{-mu}.
inline double kappa_value(const Json& v, const std::string& path, double mu) {
    if (v.is_number()) return as_number(v, path);
    if (!v.is_object()) throw ScenarioError(path, "expected a number or {value, scale}");
    const double value = number(v, path, "value");
    if (!v.contains("scale")) return value;
    const auto& s = v.at("scale");
    if (!s.is_string()) throw ScenarioError(join_path(path, "scale"), "expected a string");
    if (s.get<std::string>() == "exp(-mu)") return value * std::exp(-mu);
    if (s.get<std::string>() == "1") return value;
    throw ScenarioError(join_path(path, "scale"), "unknown scale '" + s.get<std::string>() + "'");
}

inline DisturbanceSignal disturbance_of(const Json& v, const std::string& path, int k) {
    if (!v.is_object()) throw ScenarioError(path, "expected an object");
    const auto& t = require(v, path, "type");
    if (!t.is_string()) throw ScenarioError(join_path(path, "type"), "expected a string");
    const std::string type = t.get<std::string>();
    DisturbanceSignal d;
    if (type == "zero") {
        d = DisturbanceSignal::zero(k);
    } else if (type == "constant") {
        d = DisturbanceSignal::constant(vector_of(require(v, path, "value"), join_path(path, "value")));
    } else if (type == "switched_sine_squared") {
        std::vector<double> signs(static_cast<std::size_t>(k), 1.0);
        if (v.contains("signs")) signs = vector_of(v.at("signs"), join_path(path, "signs"));
        d = DisturbanceSignal::switched_sine_squared(signs, number_or(v, path, "amplitude", 0.01),
                                                     number_or(v, path, "t_off", 5.0));
    } else if (type == "table") {
        const auto ts = vector_of(require(v, path, "t"), join_path(path, "t"));
        const auto& bs = require(v, path, "b");
        if (!bs.is_array()) throw ScenarioError(join_path(path, "b"), "expected an array of vectors");
        std::vector<std::vector<double>> values;
        for (std::size_t i = 0; i < bs.size(); ++i)
            values.push_back(vector_of(bs[i], index_path(join_path(path, "b"), i)));
        try {
            d = DisturbanceSignal::tabulated(ts, values);
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(path, e.what());
        }
    } else {
        throw ScenarioError(join_path(path, "type"),
                            "unknown disturbance '" + type + "' (zero | constant | switched_sine_squared | table)");
    }
    if (d.k() != k) throw ScenarioError(path, "disturbance dimension must equal " + std::to_string(k));
    return d;
}

inline WeightField weights_of(const Json& v, const std::string& path, const Grid1D& grid, int k, int m) {
    if (!v.is_object()) throw ScenarioError(path, "expected an object");
    try {
        if (v.contains("explicit")) {
            const std::string ep = join_path(path, "explicit");
            const auto& e = v.at("explicit");
            const auto prof = vector_profile(require(e, ep, "p"), join_path(ep, "p"), k);
            std::vector<double> diag;
            for (int j = -1; j <= grid.J; ++j) {
                const auto pj = prof(grid.x(j));
                diag.insert(diag.end(), pj.begin(), pj.end());
            }
            return WeightField::explicit_samples(k, grid.J, std::move(diag));
        }
        ExponentialWeights w;
        w.p_plus = vector_of(require(v, path, "p_plus"), join_path(path, "p_plus"));
        w.p_minus = vector_of(require(v, path, "p_minus"), join_path(path, "p_minus"));
        w.mu = number(v, path, "mu");
        if (static_cast<int>(w.p_plus.size()) != m || static_cast<int>(w.p_minus.size()) != k - m)
            throw ScenarioError(path, "p_plus / p_minus sizes must match the speed sign pattern");
        return WeightField::exponential(std::move(w), grid);
    } catch (const WeightError& e) {
        throw ScenarioError(path, e.what());
    }
}

inline double weights_mu(const Json& root) {
    if (!root.contains("weights")) return 0.0;
    const auto& w = root.at("weights");
    return w.is_object() && w.contains("mu") && w.at("mu").is_number() ? w.at("mu").get<double>() : 0.0;
}

/// K and M from the boundary block. `default_m_from_kappa` selects m = 1 - kappa
/// when M is absent; otherwise M defaults to the identity.
inline BoundaryMatrices boundary_of(const Json& b, const std::string& path, int k, int m, double mu,
                                    std::optional<std::pair<double, double>> kappa, bool default_m_from_kappa) {
    if (!b.is_object()) throw ScenarioError(path, "expected an object");
    Matrix K(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    if (b.contains("K")) {
        K = matrix_of(b.at("K"), join_path(path, "K"));
        if (static_cast<int>(K.rows()) != k) throw ScenarioError(join_path(path, "K"), "must be k x k");
    } else if (b.contains("kappa12") || b.contains("kappa21")) {
        if (k != 2) throw ScenarioError(path, "kappa12 / kappa21 need a 2x2 system; use K");
        kappa = std::make_pair(kappa_value(require(b, path, "kappa12"), join_path(path, "kappa12"), mu),
                               kappa_value(require(b, path, "kappa21"), join_path(path, "kappa21"), mu));
    }
    if (kappa) {
        K(0, 1) = kappa->first;
        K(1, 0) = kappa->second;
    }
    Matrix M = Matrix::identity(static_cast<std::size_t>(k));
    if (b.contains("M")) {
        const auto d = vector_of(b.at("M"), join_path(path, "M"));
        if (static_cast<int>(d.size()) != k) throw ScenarioError(join_path(path, "M"), "expected k diagonal entries");
        M = Matrix::diagonal(d);
    } else if (default_m_from_kappa) {
        if (k != 2) throw ScenarioError(join_path(path, "M"), "required for this system");
        M(0, 0) = 1.0 - K(0, 1);
        M(1, 1) = 1.0 - K(1, 0);
    }
    (void)m;
    return {K, M};
}

inline void reject_unknown(const Json& obj, const std::string& path, std::initializer_list<const char*> known) {
    if (!obj.is_object()) throw ScenarioError(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ScenarioError(join_path(path, key), "unknown field");
    }
}

}  // namespace detail

/// Builds a Scenario from its JSON description. Field errors carry the
/// dotted path of the offending entry.
inline Scenario build_scenario(const Json& root) {
    using namespace detail;
    reject_unknown(root, "", {"name", "grid", "model", "weights", "boundary", "xi", "description"});
    const auto& g = require(root, "", "grid");
    reject_unknown(g, "grid", {"l", "J", "T", "cfl"});
    const double l = number(g, "grid", "l");
    const int J = integer(g, "grid", "J");
    const double T = number(g, "grid", "T");
    const double cfl = number(g, "grid", "cfl");

    const auto& model = require(root, "", "model");
    const auto& name_v = require(model, "model", "name");
    if (!name_v.is_string()) throw ScenarioError("model.name", "expected a string");
    const std::string name = name_v.get<std::string>();
    const double mu = weights_mu(root);
    const Json params = model.contains("parameters") ? model.at("parameters") : Json::object();

    Scenario s;
    s.model = name;
    s.name = root.contains("name") && root.at("name").is_string() ? root.at("name").get<std::string>() : name;
    s.xi = number(root, "", "xi");
    if (!(s.xi > 0.0)) throw ScenarioError("xi", "must be positive");
    const Json boundary = root.contains("boundary") ? root.at("boundary") : Json::object();

    auto make_grid = [&](const SpeedFunction& lambda) {
        try {
            const double lmax = max_speed(lambda, l, J);
            return build_grid(l, J, T, cfl, lmax);
        } catch (const GridError& e) {
            throw ScenarioError("grid", e.what());
        }
    };

    SpeedFunction lambda;
    SourceFunction pi;
    ProfileFunction initial;
    bool m_from_kappa = false;
    std::optional<SystemCoefficients> prebuilt;
    std::optional<std::pair<double, double>> kappa;

    try {
        if (name == "linear2x2") {
            reject_unknown(model, "model", {"name", "lambda", "gamma", "initial"});
            const auto lam = vector_of(require(model, "model", "lambda"), "model.lambda");
            const Matrix gam = matrix_of(require(model, "model", "gamma"), "model.gamma");
            if (gam.rows() != lam.size()) throw ScenarioError("model.gamma", "size must match model.lambda");
            lambda = [lam](double) { return lam; };
            pi = [gam](double) { return gam; };
            initial = vector_profile(require(model, "model", "initial"), "model.initial", static_cast<int>(lam.size()));
            s.grid = make_grid(lambda);
        } else if (name == "saint_venant") {
            reject_unknown(model, "model", {"name", "parameters", "initial", "gamma_override", "kappa_override"});
            reject_unknown(params, "model.parameters", {"g", "Cf", "Sb", "H_star", "V_star", "k0", "kl"});
            auto p = std::make_shared<SaintVenantParams>();
            p->g = number_or(params, "model.parameters", "g", 9.81);
            p->Cf = number_or(params, "model.parameters", "Cf", 0.1);
            p->Sb = number_or(params, "model.parameters", "Sb", 0.0459);
            p->l = l;
            p->Hstar = scalar_profile(params.contains("H_star") ? params.at("H_star") : Json(2.0), "model.parameters.H_star");
            p->Vstar = scalar_profile(params.contains("V_star") ? params.at("V_star") : Json(3.0), "model.parameters.V_star");
            p->k0 = number_or(params, "model.parameters", "k0", 0.0);
            p->kl = number_or(params, "model.parameters", "kl", 0.0);
            s.grid = make_grid([p](double x) {
                const auto v = saint_venant_speeds(*p, x);
                return std::vector<double>{v[0], v[1]};
            });
            SaintVenantOptions opt;
            if (model.contains("gamma_override")) {
                opt.gamma_override = matrix_of(model.at("gamma_override"), "model.gamma_override");
                if (opt.gamma_override->rows() != 2) throw ScenarioError("model.gamma_override", "must be 2x2");
            }
            if (model.contains("kappa_override")) {
                const auto& ko = model.at("kappa_override");
                opt.kappa_override = std::make_pair(
                    kappa_value(require(ko, "model.kappa_override", "kappa12"), "model.kappa_override.kappa12", mu),
                    kappa_value(require(ko, "model.kappa_override", "kappa21"), "model.kappa_override.kappa21", mu));
            }
            auto sv = linearize_saint_venant(*p, s.grid, opt);
            kappa = std::make_pair(sv.kappa12, sv.kappa21);
            m_from_kappa = true;
            if (sv.gamma_deviation && *sv.gamma_deviation > 1e-6) {
                std::ostringstream os;
                os << "gamma override differs from the source formulas by up to " << *sv.gamma_deviation;
                s.notes.push_back(os.str());
            }
            prebuilt = std::move(sv.coefficients);
            // Initial data given in physical variables (H, V), or directly in w.
            const auto& ini = require(model, "model", "initial");
            if (ini.is_object()) {
                reject_unknown(ini, "model.initial", {"H", "V"});
                auto H = scalar_profile(require(ini, "model.initial", "H"), "model.initial.H");
                auto V = scalar_profile(require(ini, "model.initial", "V"), "model.initial.V");
                initial = [p, H, V](double x) {
                    const auto w = saint_venant_to_characteristic(H(x), V(x), p->Hstar(x), p->Vstar(x), p->g);
                    return std::vector<double>{w[0], w[1]};
                };
            } else {
                initial = vector_profile(ini, "model.initial", 2);
            }
        } else if (name == "isothermal_euler") {
            reject_unknown(model, "model", {"name", "parameters", "initial"});
            reject_unknown(params, "model.parameters", {"a", "f_over_D", "q_star", "rho0"});
            auto p = std::make_shared<EulerParams>();
            p->a = number_or(params, "model.parameters", "a", 1.0);
            p->f_over_D = number_or(params, "model.parameters", "f_over_D", 1.0);
            p->q_star = number_or(params, "model.parameters", "q_star", 0.2);
            p->rho0 = number_or(params, "model.parameters", "rho0", 3.0);
            p->l = l;
            lambda = [p](double x) {
                const auto v = euler_speeds(*p, x);
                return std::vector<double>{v[0], v[1]};
            };
            s.grid = make_grid(lambda);
            const double h = s.grid.dx / 10.0;
            pi = [p, h](double x) { return euler_gamma(*p, x, h); };
            initial = vector_profile(require(model, "model", "initial"), "model.initial", 2);
            m_from_kappa = true;
        } else {
            throw ScenarioError("model.name",
                                "unknown model '" + name + "' (linear2x2 | saint_venant | isothermal_euler)");
        }
    } catch (const ModelError& e) {
        throw ScenarioError("model", e.what());
    }

    int k = 0, m = 0;
    if (prebuilt) {
        k = prebuilt->k();
        m = prebuilt->m();
    } else {
        for (double v : lambda(0.0)) {
            ++k;
            m += v > 0.0 ? 1 : 0;
        }
    }
    if (boundary.contains("kappa12") || boundary.contains("K")) kappa.reset();
    reject_unknown(boundary, "boundary", {"kappa12", "kappa21", "K", "M", "disturbance"});
    const auto bm = detail::boundary_of(boundary, "boundary", k, m, mu, kappa, m_from_kappa);
    try {
        s.coefficients = prebuilt ? prebuilt->with_boundary(bm) : sample_coefficients(lambda, pi, s.grid, bm);
    } catch (const CoefficientError& e) {
        throw ScenarioError("model", e.what());
    } catch (const ModelError& e) {
        throw ScenarioError("model", e.what());
    }
    s.weights = detail::weights_of(require(root, "", "weights"), "weights", s.grid, k, m);
    s.disturbance = boundary.contains("disturbance")
                        ? detail::disturbance_of(boundary.at("disturbance"), "boundary.disturbance", k)
                        : DisturbanceSignal::zero(k);
    s.initial = sample_profile(initial, s.grid, k);
    return s;
}

/// Reads and parses a scenario file; syntax errors report line and column.
inline Json load_scenario_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("", "cannot open scenario file '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ScenarioError("", path + ": " + e.what());
    }
}

inline Scenario load_scenario(const std::string& path) { return build_scenario(load_scenario_json(path)); }

/// Copy of the description with grid.J replaced.
inline Json with_cells(Json root, int J) {
    root["grid"]["J"] = J;
    return root;
}

/// Copy of the description with weights.mu replaced.
inline Json with_mu(Json root, double mu) {
    root["weights"]["mu"] = mu;
    return root;
}

/// True if the scenario reproduces the constant 2x2 benchmark on its own
/// mesh (same samples, weights, disturbance, initial data, xi and T = 10).
inline bool matches_linear_benchmark(const Scenario& s) {
    if (s.model != "linear2x2" || s.coefficients.k() != 2 || s.grid.l != 1.0 || s.grid.T != 10.0) return false;
    const auto& imp = s.weights.implicit_params();
    if (!imp || imp->mu != 0.575) return false;
    const Scenario ref = build_linear_benchmark(s.grid.J, s.grid.cfl, s.grid.T, imp->mu, 0.125, 0.5, 0.5);
    if (s.xi != ref.xi || s.initial != ref.initial) return false;
    const auto& a = s.coefficients;
    const auto& b = ref.coefficients;
    for (int j = -1; j <= a.J(); ++j)
        for (int i = 0; i < 2; ++i)
            if (a.lambda(j, i) != b.lambda(j, i) || s.weights.p(j, i) != ref.weights.p(j, i)) return false;
    for (int j = 0; j < a.J(); ++j)
        if ((a.pi(j) - b.pi(j)).max_abs() != 0.0) return false;
    if ((a.K() - b.K()).max_abs() != 0.0 || (a.M() - b.M()).max_abs() != 0.0) return false;
    for (double t : {0.0, 0.25, 0.5, 1.3, 4.5, 4.999, 5.0, 7.0})
        if (s.disturbance(t) != ref.disturbance(t)) return false;
    return true;
}

}  // namespace hypiss
