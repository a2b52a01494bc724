#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tabpred {

// Dense row-major matrix of doubles. Deliberately minimal: the solvers in
// this library operate on small matrices (at most a few hundred columns).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    bool operator==(const Matrix&) const = default;
};

// Eigendecomposition of a symmetric matrix: values[i] belongs to the i-th
// column of vectors. Values are sorted descending.
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;
};

// Cyclic Jacobi rotations. Intended for the small pooled-scatter matrices
// used by the discriminant model; O(d^3) per sweep.
SymmetricEigen jacobi_eigen(const Matrix& symmetric, int max_sweeps = 100);

// y = M x
std::vector<double> mat_vec(const Matrix& m, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);

} // namespace tabpred
