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
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hypiss/grid.hpp"

namespace hypiss {

class WeightError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters of the exponential weight diag{p+ e^{-mu x}, p- e^{mu x}}.
struct ExponentialWeights {
    std::vector<double> p_plus;
    std::vector<double> p_minus;
    double mu = 0.0;
};

/// Diagonal Lyapunov weights P_j sampled at j = -1..J.
class WeightField {
public:
    WeightField() = default;

    /// Explicit samples, (J + 2) rows of k diagonal entries, ghost rows first/last.
    static WeightField explicit_samples(int k, int J, std::vector<double> diag) {
        WeightField w;
        w.k_ = k;
        w.J_ = J;
        w.diag_ = std::move(diag);
        w.validate();
        return w;
    }

    /// Materializes the exponential form at cell and ghost centers.
    static WeightField exponential(ExponentialWeights params, const Grid1D& grid) {
        if (!(params.mu > 0.0)) throw WeightError("WeightField: mu must be positive");
        WeightField w;
        const int m = static_cast<int>(params.p_plus.size());
        w.k_ = m + static_cast<int>(params.p_minus.size());
        w.J_ = grid.J;
        w.diag_.reserve(static_cast<std::size_t>((grid.J + 2) * w.k_));
        for (int j = -1; j <= grid.J; ++j) {
            const double x = grid.x(j);
            for (double p : params.p_plus) w.diag_.push_back(p * std::exp(-params.mu * x));
            for (double p : params.p_minus) w.diag_.push_back(p * std::exp(params.mu * x));
        }
        w.implicit_ = std::move(params);
        w.validate();
        return w;
    }

    int k() const noexcept { return k_; }
    int J() const noexcept { return J_; }

    /// Diagonal entry i of P_j, j in [-1, J].
    double p(int j, int i) const noexcept { return diag_[static_cast<std::size_t>((j + 1) * k_ + i)]; }

    const std::optional<ExponentialWeights>& implicit_params() const noexcept { return implicit_; }

    /// Smallest diagonal entry over interior cells (zeta).
    double min_interior() const noexcept {
        double v = std::numeric_limits<double>::infinity();
        for (int j = 0; j < J_; ++j)
            for (int i = 0; i < k_; ++i) v = std::min(v, p(j, i));
        return v;
    }

    /// Largest diagonal entry over interior cells (beta).
    double max_interior() const noexcept {
        double v = 0.0;
        for (int j = 0; j < J_; ++j)
            for (int i = 0; i < k_; ++i) v = std::max(v, p(j, i));
        return v;
    }

private:
    void validate() const {
        if (k_ < 1 || J_ < 1) throw WeightError("WeightField: empty field");
        if (diag_.size() != static_cast<std::size_t>((J_ + 2) * k_))
            throw WeightError("WeightField: samples must cover j = -1..J");
        for (int j = -1; j <= J_; ++j)
            for (int i = 0; i < k_; ++i)
                if (!(p(j, i) > 0.0) || !std::isfinite(p(j, i))) {
                    std::ostringstream os;
                    os << "WeightField: nonpositive weight " << p(j, i) << " at j=" << j << ", component " << i;
                    throw WeightError(os.str());
                }
    }

    int k_ = 0;
    int J_ = 0;
    std::vector<double> diag_;
    std::optional<ExponentialWeights> implicit_;
};

}  // namespace hypiss
