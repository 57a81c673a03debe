#pragma once

#include <cstddef>
#include <vector>

namespace thermalab {

/// Dense row-major matrix. Plain storage, no expression templates; the hot
/// operations live in kernels.hpp.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Dense real symmetric matrix. Full storage; set() writes both triangles so
/// entries(i,j) == entries(j,i) holds exactly by construction.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

    static SymmetricMatrix diagonal(const std::vector<double>& d);

    std::size_t dim() const { return dim_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    void set(std::size_t i, std::size_t j, double v) {
        data_[i * dim_ + j] = v;
        data_[j * dim_ + i] = v;
    }

    void add(std::size_t i, std::size_t j, double v) {
        data_[i * dim_ + j] += v;
        if (i != j) data_[j * dim_ + i] += v;
    }

    const double* data() const { return data_.data(); }
    const double* row(std::size_t i) const { return data_.data() + i * dim_; }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
        return t;
    }

    double max_abs() const;

    Matrix to_dense() const;

private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

/// Spectral decomposition of a real symmetric matrix: ascending eigenvalues
/// and the orthogonal matrix whose column a holds the eigenvector for
/// eigenvalue a.
struct EigenSystem {
    std::vector<double> eigenvalues;
    Matrix vectors;

    std::size_t dim() const { return eigenvalues.size(); }
};

} // namespace thermalab
