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
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hypiss {

class LambertWError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline constexpr double inv_e = 0.36787944117144232159552377016146;

/// Halley on g(w) = w + ln(-w) - log_neg_z, which has the same root as
/// w e^w = z on the lower branch and never forms e^w.
inline double lambert_w_minus1_log_halley(double log_neg_z, double w) {
    for (int it = 0; it < 64; ++it) {
        const double g = w + std::log(-w) - log_neg_z;
        const double g1 = 1.0 + 1.0 / w;
        const double g2 = -1.0 / (w * w);
        const double step = g / (g1 - 0.5 * g * g2 / g1);
        const double next = w - step;
        if (!(next < -1.0)) {
            w = 0.5 * (w - 1.0);  // overshot the branch point; back off
            continue;
        }
        w = next;
        if (std::abs(step) <= 4e-16 * std::abs(w)) break;
    }
    return w;
}

/// Halley on f(w) = w e^w - z; used near the branch point where ln(-w) is flat.
inline double lambert_w_minus1_exp_halley(double z, double w) {
    for (int it = 0; it < 64; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - z;
        const double f1 = ew * (w + 1.0);
        if (f1 == 0.0) break;
        const double step = f / (f1 - (w + 2.0) * f / (2.0 * (w + 1.0)));
        const double next = w - step;
        if (!(next <= -1.0)) break;
        w = next;
        if (std::abs(step) <= 4e-16 * std::abs(w)) break;
    }
    return w;
}

/// Picks the best of w and its two floating-point neighbours by residual.
inline double lambert_w_polish(double z, double w) {
    auto res = [z](double v) { return std::abs(static_cast<long double>(v) * std::exp(static_cast<long double>(v)) - z); };
    double best = w;
    long double r = res(w);
    for (double v : {std::nextafter(w, -INFINITY), std::nextafter(w, 0.0)}) {
        if (v > -1.0) continue;
        const long double rv = res(v);
        if (rv < r) {
            r = rv;
            best = v;
        }
    }
    return best;
}

}  // namespace detail

/// Lower branch W_{-1} given ln(-z) instead of z, for arguments far below
/// the smallest double. Requires log_neg_z <= -1.
inline double lambert_w_minus1_log(double log_neg_z) {
    if (!(log_neg_z <= -1.0 + 1e-15)) {
        std::ostringstream os;
        os << "lambert_w_minus1_log: ln(-z) = " << log_neg_z << " lies above -1 (z outside [-1/e, 0))";
        throw LambertWError(os.str());
    }
    if (log_neg_z >= -1.0) return -1.0;
    double w;
    if (log_neg_z > -1.5) {
        // z close to -1/e: branch-point series in p = -sqrt(2(1 + e z)).
        const double ez = -std::exp(log_neg_z + 1.0);
        const double p = -std::sqrt(2.0 * (1.0 + ez));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else {
        const double l1 = log_neg_z;
        const double l2 = std::log(-l1);
        w = l1 - l2 + l2 / l1;
        if (!(w < -1.0)) w = -1.5;
    }
    return detail::lambert_w_minus1_log_halley(log_neg_z, w);
}

/// Lower real branch W_{-1}(z) for z in [-1/e, 0): the solution w <= -1 of w e^w = z.
inline double lambert_w_minus1(double z) {
    if (!std::isfinite(z) || z >= 0.0 || z < -detail::inv_e * (1.0 + 1e-15)) {
        std::ostringstream os;
        os.precision(17);
        os << "lambert_w_minus1: z = " << z << " outside [-1/e, 0)";
        throw LambertWError(os.str());
    }
    if (z <= -detail::inv_e) return -1.0;
    const double q = 1.0 + std::numbers::e * z;  // distance to the branch point, scaled
    double w;
    if (q < 0.25) {
        const double p = -std::sqrt(2.0 * q);
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
        if (!(w < -1.0)) w = -1.0 - 1e-8;
        w = detail::lambert_w_minus1_exp_halley(z, w);
    } else {
        w = lambert_w_minus1_log(std::log(-z));
    }
    return detail::lambert_w_polish(z, w);
}

}  // namespace hypiss
