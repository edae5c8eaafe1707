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
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypiss/linalg.hpp"

namespace hypiss {

/// The scalar pulse d(t) = amplitude * sin^2(pi t) on [0, t_off), zero after.
inline double switched_pulse(double t, double amplitude = 0.01, double t_off = 5.0) {
    const double s = std::sin(std::numbers::pi * t);
    return t < t_off ? amplitude * s * s : 0.0;
}

/// Boundary disturbance b(t) in R^k.
class DisturbanceSignal {
public:
    using Function = std::function<std::vector<double>(double t)>;

    DisturbanceSignal() = default;
    DisturbanceSignal(int k, Function fn, std::string label = "custom")
        : k_(k), fn_(std::move(fn)), label_(std::move(label)) {}

    int k() const noexcept { return k_; }
    const std::string& label() const noexcept { return label_; }

    std::vector<double> operator()(double t) const {
        if (!fn_) return std::vector<double>(static_cast<std::size_t>(k_), 0.0);
        auto b = fn_(t);
        if (static_cast<int>(b.size()) != k_) throw std::invalid_argument("DisturbanceSignal: wrong dimension");
        return b;
    }

    static DisturbanceSignal zero(int k) { return DisturbanceSignal(k, nullptr, "zero"); }

    static DisturbanceSignal constant(std::vector<double> value) {
        const int k = static_cast<int>(value.size());
        return DisturbanceSignal(k, [v = std::move(value)](double) { return v; }, "constant");
    }

    /// b(t) = signs * switched_pulse(t).
    static DisturbanceSignal switched_sine_squared(std::vector<double> signs, double amplitude = 0.01,
                                                   double t_off = 5.0) {
        const int k = static_cast<int>(signs.size());
        return DisturbanceSignal(
            k,
            [signs = std::move(signs), amplitude, t_off](double t) {
                const double d = switched_pulse(t, amplitude, t_off);
                std::vector<double> b(signs.size());
                for (std::size_t i = 0; i < b.size(); ++i) b[i] = signs[i] * d;
                return b;
            },
            "switched_sine_squared");
    }

    /// Piecewise-linear interpolation of tabulated samples, held constant
    /// outside the table range.
    static DisturbanceSignal tabulated(std::vector<double> times, std::vector<std::vector<double>> values) {
        if (times.empty() || times.size() != values.size())
            throw std::invalid_argument("DisturbanceSignal: table needs matching, nonempty t and b columns");
        if (!std::is_sorted(times.begin(), times.end()))
            throw std::invalid_argument("DisturbanceSignal: table times must be nondecreasing");
        const int k = static_cast<int>(values.front().size());
        for (const auto& v : values)
            if (static_cast<int>(v.size()) != k) throw std::invalid_argument("DisturbanceSignal: ragged table");
        return DisturbanceSignal(
            k,
            [times = std::move(times), values = std::move(values)](double t) {
                if (t <= times.front()) return values.front();
                if (t >= times.back()) return values.back();
                const auto it = std::upper_bound(times.begin(), times.end(), t);
                const auto hi = static_cast<std::size_t>(it - times.begin());
                const auto lo = hi - 1;
                const double w = (t - times[lo]) / (times[hi] - times[lo]);
                std::vector<double> b(values[lo].size());
                for (std::size_t i = 0; i < b.size(); ++i) b[i] = (1.0 - w) * values[lo][i] + w * values[hi][i];
                return b;
            },
            "tabulated");
    }

private:
    int k_ = 0;
    Function fn_;
    std::string label_ = "zero";
};

/// Running supremum of |b|^2.
class SupTracker {
public:
    void observe(std::span<const double> b) noexcept { sup_ = std::max(sup_, squared_norm(b)); }
    double value() const noexcept { return sup_; }

private:
    double sup_ = 0.0;
};

}  // namespace hypiss
