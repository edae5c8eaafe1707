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
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hypiss/grid.hpp"
#include "hypiss/linalg.hpp"

namespace hypiss {

class CoefficientError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Diagonal characteristic speeds at a point; first m entries positive, rest negative.
using SpeedFunction = std::function<std::vector<double>(double x)>;
/// Source matrix Pi(x).
using SourceFunction = std::function<Matrix(double x)>;

/// Boundary feedback K = [[0, K-], [K+, 0]] and disturbance injection M.
struct BoundaryMatrices {
    Matrix K;
    Matrix M;
};

/// Sampled coefficients of W_t + Lambda(x) W_x + Pi(x) W = 0 with boundary
/// data [W+(0); W-(l)] = K [W+(l); W-(0)] + M b(t).
///
/// Speeds are stored signed at j = -1..J (ghost centers included); sources at
/// interior cells only.
class SystemCoefficients {
public:
    SystemCoefficients() = default;

    SystemCoefficients(int k, int m, int J, std::vector<double> lambda, std::vector<Matrix> pi,
                       BoundaryMatrices boundary)
        : k_(k), m_(m), J_(J), lambda_(std::move(lambda)), pi_(std::move(pi)), boundary_(std::move(boundary)) {
        validate();
    }

    int k() const noexcept { return k_; }
    int m() const noexcept { return m_; }
    int J() const noexcept { return J_; }

    /// Signed speed of component i at cell j in [-1, J].
    double lambda(int j, int i) const noexcept { return lambda_[static_cast<std::size_t>((j + 1) * k_ + i)]; }
    /// |speed|; for i >= m this is the Lambda- magnitude.
    double speed(int j, int i) const noexcept { return std::abs(lambda(j, i)); }
    const Matrix& pi(int j) const noexcept { return pi_[static_cast<std::size_t>(j)]; }
    const Matrix& K() const noexcept { return boundary_.K; }
    const Matrix& M() const noexcept { return boundary_.M; }
    const BoundaryMatrices& boundary() const noexcept { return boundary_; }

    double max_speed() const noexcept {
        double s = 0.0;
        for (double v : lambda_) s = std::max(s, std::abs(v));
        return s;
    }

    SystemCoefficients with_boundary(BoundaryMatrices boundary) const {
        SystemCoefficients c = *this;
        c.boundary_ = std::move(boundary);
        c.validate();
        return c;
    }

private:
    void validate() const {
        if (k_ < 1 || m_ < 0 || m_ > k_) throw CoefficientError("SystemCoefficients: invalid (k, m)");
        if (lambda_.size() != static_cast<std::size_t>((J_ + 2) * k_))
            throw CoefficientError("SystemCoefficients: speed samples must cover j = -1..J");
        if (pi_.size() != static_cast<std::size_t>(J_))
            throw CoefficientError("SystemCoefficients: source samples must cover j = 0..J-1");
        for (const auto& p : pi_)
            if (p.rows() != static_cast<std::size_t>(k_) || !p.square())
                throw CoefficientError("SystemCoefficients: source matrix must be k x k");
        for (int j = -1; j <= J_; ++j)
            for (int i = 0; i < k_; ++i) {
                const double v = lambda(j, i);
                if (!(i < m_ ? v > 0.0 : v < 0.0)) {
                    std::ostringstream os;
                    os << "SystemCoefficients: speed " << i << " at j=" << j << " is " << v
                       << "; expected " << (i < m_ ? "> 0" : "< 0");
                    throw CoefficientError(os.str());
                }
            }
        const auto& K = boundary_.K;
        const auto& M = boundary_.M;
        const auto ku = static_cast<std::size_t>(k_);
        if (K.rows() != ku || K.cols() != ku || M.rows() != ku || M.cols() != ku)
            throw CoefficientError("SystemCoefficients: K and M must be k x k");
        for (int r = 0; r < k_; ++r)
            for (int c = 0; c < k_; ++c) {
                const bool diag_block = (r < m_) == (c < m_);
                if (diag_block && K(r, c) != 0.0)
                    throw CoefficientError("SystemCoefficients: K must have zero diagonal blocks");
                if (r != c && M(r, c) != 0.0) throw CoefficientError("SystemCoefficients: M must be diagonal");
            }
    }

    int k_ = 0;
    int m_ = 0;
    int J_ = 0;
    std::vector<double> lambda_;
    std::vector<Matrix> pi_;
    BoundaryMatrices boundary_;
};

/// Largest |speed| over cell and ghost centers of a J-cell mesh on [0, l].
inline double max_speed(const SpeedFunction& lambda_fn, double l, int J) {
    const double dx = l / J;
    double s = 0.0;
    for (int j = -1; j <= J; ++j)
        for (double v : lambda_fn((j + 0.5) * dx)) s = std::max(s, std::abs(v));
    return s;
}

/// Samples Lambda at j = -1..J and Pi at j = 0..J-1. The number of positive
/// speeds m is read from the first sample and must not change along x.
inline SystemCoefficients sample_coefficients(const SpeedFunction& lambda_fn, const SourceFunction& pi_fn,
                                              const Grid1D& grid, BoundaryMatrices boundary) {
    const auto first = lambda_fn(grid.x(-1));
    const int k = static_cast<int>(first.size());
    if (k == 0) throw CoefficientError("sample_coefficients: empty speed vector");
    int m = 0;
    while (m < k && first[static_cast<std::size_t>(m)] > 0.0) ++m;

    std::vector<double> lambda;
    lambda.reserve(static_cast<std::size_t>((grid.J + 2) * k));
    for (int j = -1; j <= grid.J; ++j) {
        const auto v = lambda_fn(grid.x(j));
        if (static_cast<int>(v.size()) != k) throw CoefficientError("sample_coefficients: speed size changes along x");
        for (int i = 0; i < k; ++i) {
            const double s = v[static_cast<std::size_t>(i)];
            if (s == 0.0 || !std::isfinite(s)) {
                std::ostringstream os;
                os << "sample_coefficients: speed " << i << " is " << s << " at x=" << grid.x(j);
                throw CoefficientError(os.str());
            }
            if ((i < m) != (s > 0.0)) {
                std::ostringstream os;
                os << "sample_coefficients: sign pattern of speed " << i << " changes at x=" << grid.x(j);
                throw CoefficientError(os.str());
            }
        }
        lambda.insert(lambda.end(), v.begin(), v.end());
    }
    std::vector<Matrix> pi;
    pi.reserve(static_cast<std::size_t>(grid.J));
    for (int j = 0; j < grid.J; ++j) pi.push_back(pi_fn(grid.x(j)));
    return SystemCoefficients(k, m, grid.J, std::move(lambda), std::move(pi), std::move(boundary));
}

/// K = [[0, kappa12], [kappa21, 0]] and M = diag(m1, m2) for the 2x2 systems.
inline BoundaryMatrices boundary_2x2(double kappa12, double kappa21, double m1, double m2) {
    return {Matrix{{0.0, kappa12}, {kappa21, 0.0}}, Matrix{{m1, 0.0}, {0.0, m2}}};
}

}  // namespace hypiss
