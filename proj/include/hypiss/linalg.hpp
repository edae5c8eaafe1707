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
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypiss {

/// Dense row-major matrix for the small k x k blocks of the balance law.
/// k is 2 in every model shipped here, so no attempt is made at blocking.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(std::span<const double> d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// (A + A^T) / 2
    Matrix symmetrized() const {
        Matrix s(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
        return s;
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        check_same_shape(a, b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }
    friend Matrix operator-(Matrix a, const Matrix& b) {
        check_same_shape(a, b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }
    friend Matrix operator*(double s, Matrix a) {
        for (double& v : a.data_) v *= s;
        return a;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: inner dimension mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t l = 0; l < a.cols_; ++l) {
                const double ail = a(i, l);
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += ail * b(l, j);
            }
        return c;
    }

    /// y = A x
    std::vector<double> apply(std::span<const double> x) const {
        if (x.size() != cols_) throw std::invalid_argument("Matrix: vector length mismatch");
        std::vector<double> y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    /// y^T A z
    double bilinear(std::span<const double> y, std::span<const double> z) const {
        if (y.size() != rows_ || z.size() != cols_) throw std::invalid_argument("Matrix: bilinear shape mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double r = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) r += (*this)(i, j) * z[j];
            s += y[i] * r;
        }
        return s;
    }

private:
    static void check_same_shape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

class EigenError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eigenvalues of the 2x2 symmetric matrix [[a, b], [b, c]], ascending.
/// Same closed form as sigma_pm = ((a+c) +- sqrt((a+c)^2 - 4(ac - b^2))) / 2,
/// written with hypot to avoid cancellation in the discriminant.
inline std::vector<double> sym_eigen_2x2(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), b);
    return {mean - radius, mean + radius};
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix (symmetrized first),
/// ascending. Sweeps until the off-diagonal Frobenius norm is below 1e-12,
/// scaled by the largest entry when that exceeds one.
inline std::vector<double> jacobi_eigenvalues(const Matrix& input, int max_sweeps = 64) {
    if (!input.square()) throw std::invalid_argument("jacobi_eigenvalues: matrix must be square");
    const std::size_t n = input.rows();
    Matrix a = input.symmetrized();

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };
    const double tol = 1e-12 * std::max(1.0, a.max_abs());

    int sweep = 0;
    while (off_norm() >= tol) {
        if (sweep++ >= max_sweeps)
            throw EigenError("jacobi_eigenvalues: no convergence after " + std::to_string(max_sweeps) +
                             " sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t r = 0; r < n; ++r) {
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double apr = a(p, r);
                    const double aqr = a(q, r);
                    a(p, r) = c * apr - s * aqr;
                    a(q, r) = s * apr + c * aqr;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Eigenvalues of a symmetric matrix, ascending: closed form for k <= 2,
/// Jacobi otherwise.
inline std::vector<double> sym_eigenvalues(const Matrix& input) {
    if (!input.square()) throw std::invalid_argument("sym_eigenvalues: matrix must be square");
    const std::size_t n = input.rows();
    if (n == 0) return {};
    if (n == 1) return {input(0, 0)};
    if (n == 2) {
        const Matrix a = input.symmetrized();
        return sym_eigen_2x2(a(0, 0), a(0, 1), a(1, 1));
    }
    return jacobi_eigenvalues(input);
}

inline double squared_norm(std::span<const double> v) noexcept {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace hypiss
