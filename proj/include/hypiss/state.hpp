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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hypiss {

/// Cell states W_j in R^k for j = -1..J in one contiguous array.
///
/// Components 0..m-1 are W+, m..k-1 are W-. The left ghost carries only W+
/// and the right ghost only W-; the other ghost components stay zero.
class StateField {
public:
    StateField() = default;
    StateField(int k, int J) : k_(k), J_(J), values_(static_cast<std::size_t>((J + 2) * k), 0.0) {
        if (k < 1 || J < 1) throw std::invalid_argument("StateField: k and J must be positive");
    }

    int k() const noexcept { return k_; }
    int J() const noexcept { return J_; }

    double& operator()(int j, int i) noexcept { return values_[index(j, i)]; }
    double operator()(int j, int i) const noexcept { return values_[index(j, i)]; }

    std::span<double> cell(int j) noexcept { return {values_.data() + index(j, 0), static_cast<std::size_t>(k_)}; }
    std::span<const double> cell(int j) const noexcept {
        return {values_.data() + index(j, 0), static_cast<std::size_t>(k_)};
    }

    /// Interior cells 0..J-1 as one flat span.
    std::span<const double> interior() const noexcept {
        return {values_.data() + k_, static_cast<std::size_t>(J_ * k_)};
    }

    std::span<const double> raw() const noexcept { return values_; }

    int n = 0;
    double t = 0.0;

private:
    std::size_t index(int j, int i) const noexcept { return static_cast<std::size_t>((j + 1) * k_ + i); }

    int k_ = 0;
    int J_ = 0;
    std::vector<double> values_;
};

}  // namespace hypiss
