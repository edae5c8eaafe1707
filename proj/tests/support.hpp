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

// Seeded generators shared by the property tests.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hypiss/linalg.hpp"

namespace hypiss::testing {

class Gen {
public:
    explicit Gen(std::uint32_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    std::vector<double> vec(std::size_t n, double lo = -1.0, double hi = 1.0) {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

    Matrix matrix(std::size_t n, double lo = -1.0, double hi = 1.0) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(lo, hi);
        return m;
    }

    Matrix symmetric(std::size_t n) { return matrix(n).symmetrized(); }

    /// G^T G, positive semi-definite.
    Matrix psd(std::size_t n) {
        const Matrix g = matrix(n);
        return g.transposed() * g;
    }

    std::mt19937& engine() { return rng_; }

private:
    std::mt19937 rng_;
};

}  // namespace hypiss::testing
