#include "hext/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "hext/error.hpp"

namespace hext {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> entries) {
    for (const Triplet& t : entries) {
        if (t.row >= rows || t.col >= cols)
            fail(errc::invalid_input, "triplet index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    m.cols_of_.reserve(entries.size());
    m.values_.reserve(entries.size());

    std::size_t i = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        m.row_ptr_[r] = m.values_.size();
        while (i < entries.size() && entries[i].row == r) {
            std::size_t c = entries[i].col;
            double v = entries[i].value;
            ++i;
            while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
                v += entries[i].value;
                ++i;
            }
            m.cols_of_.push_back(c);
            m.values_.push_back(v);
        }
    }
    m.row_ptr_[rows] = m.values_.size();
    return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            acc += values_[k] * x[cols_of_[k]];
        y[r] = acc;
    }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(rows_);
    multiply(x, y);
    return y;
}

double SparseMatrix::value_at(std::size_t i, std::size_t j) const {
    auto idx = row_indices(i);
    auto pos = std::lower_bound(idx.begin(), idx.end(), j);
    if (pos == idx.end() || *pos != j) return 0.0;
    return row_values(i)[static_cast<std::size_t>(pos - idx.begin())];
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(std::min(rows_, cols_), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = value_at(i, i);
    return d;
}

bool SparseMatrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r) {
        auto idx = row_indices(r);
        auto val = row_values(r);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (idx[k] == r) continue;
            if (value_at(idx[k], r) != val[k]) return false;
        }
    }
    return true;
}

Matrix SparseMatrix::to_dense() const {
    Matrix d(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        auto idx = row_indices(r);
        auto val = row_values(r);
        for (std::size_t k = 0; k < idx.size(); ++k) d(r, idx[k]) = val[k];
    }
    return d;
}

DenseLu::DenseLu(Matrix a) : lu_(std::move(a)) {
    const std::size_t n = lu_.rows();
    if (n != lu_.cols()) fail(errc::invalid_parameter, "LU needs a square matrix");
    pivot_.resize(n);
    for (std::size_t i = 0; i < n; ++i) pivot_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::fabs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = std::fabs(lu_(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) fail(errc::solver_failure, "singular matrix in dense factorization");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(pivot_[k], pivot_[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            double m = lu_(i, k) / lu_(k, k);
            lu_(i, k) = m;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
        }
    }
}

std::vector<double> DenseLu::solve(std::span<const double> b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) fail(errc::invalid_parameter, "right-hand side size mismatch");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[pivot_[i]];
    for (std::size_t i = 1; i < n; ++i) {
        double acc = x[i];
        for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
        x[i] = acc;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= lu_(ii, j) * x[j];
        x[ii] = acc / lu_(ii, ii);
    }
    return x;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> a) {
    return std::sqrt(dot(a, a));
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

} // namespace hext
