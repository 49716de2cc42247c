#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hext {

// Dense row-major matrix. Small helper, not a full linear algebra type;
// the heavy lifting happens in SparseMatrix and the solvers.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
        return out;
    }

    void set_column(std::size_t j, std::span<const double> values) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

// Compressed sparse row matrix with per-row column indices kept sorted.
// Duplicate triplets are summed during assembly. Entry order is fully
// determined by (row, col), so identical inputs give identical storage.
class SparseMatrix {
public:
    SparseMatrix() = default;

    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                      std::vector<Triplet> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    std::span<const std::size_t> row_indices(std::size_t i) const {
        return {cols_of_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
    }
    std::span<const double> row_values(std::size_t i) const {
        return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
    }

    // y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;

    double value_at(std::size_t i, std::size_t j) const; // 0 when absent

    std::vector<double> diagonal() const;

    // Exact symmetry: the stored pattern and values mirror bit-for-bit.
    bool is_symmetric() const;

    Matrix to_dense() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_of_;
    std::vector<double> values_;
};

// LU factorization with partial pivoting over a dense matrix, reusable
// across right-hand sides.
class DenseLu {
public:
    explicit DenseLu(Matrix a); // factors in place; throws on a zero pivot

    std::vector<double> solve(std::span<const double> b) const;
    std::size_t size() const { return lu_.rows(); }

private:
    Matrix lu_;
    std::vector<std::size_t> pivot_;
};

// Basic vector kernels shared by the solvers. Sequential and in index
// order, so results are reproducible run to run.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y); // y += alpha x

} // namespace hext
