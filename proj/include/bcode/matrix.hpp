#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace bcode {

// Dense row-major matrix of doubles. Constructors reject non-finite entries.
// Zero-sized shapes (m x 0, 0 x n) are permitted; they appear as the empty
// basis / empty coefficient block at the start of a coding run.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        if (values_.size() != rows_ * cols_)
            throw std::invalid_argument("matrix: values length does not match rows*cols");
        check_finite(values_);
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        std::vector<double> v;
        v.reserve(r * c);
        for (const auto& row : rows) {
            if (row.size() != c)
                throw std::invalid_argument("matrix: ragged row list");
            v.insert(v.end(), row.begin(), row.end());
        }
        return Matrix(r, c, std::move(v));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

    const double* data() const { return values_.data(); }
    double* data() { return values_.data(); }

    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) {
        return {values_.data() + r * cols_, cols_};
    }

    std::vector<double> col(std::size_t c) const {
        std::vector<double> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = values_[i * cols_ + c];
        return out;
    }

    void set_col(std::size_t c, std::span<const double> v) {
        if (v.size() != rows_)
            throw std::invalid_argument("matrix: column length mismatch");
        for (std::size_t i = 0; i < rows_; ++i) values_[i * cols_ + c] = v[i];
    }

    // Grows the matrix by one column (rebuilds the row-major layout).
    void append_col(std::span<const double> v) {
        if (rows_ == 0 && cols_ == 0) rows_ = v.size();
        if (v.size() != rows_)
            throw std::invalid_argument("matrix: appended column has wrong length");
        std::vector<double> next(rows_ * (cols_ + 1));
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) next[i * (cols_ + 1) + j] = values_[i * cols_ + j];
            next[i * (cols_ + 1) + cols_] = v[i];
        }
        values_ = std::move(next);
        ++cols_;
        check_finite(values_);
    }

    void append_row(std::span<const double> v) {
        if (rows_ == 0 && cols_ == 0) cols_ = v.size();
        if (v.size() != cols_)
            throw std::invalid_argument("matrix: appended row has wrong length");
        values_.insert(values_.end(), v.begin(), v.end());
        ++rows_;
        check_finite(values_);
    }

    void drop_last_col() {
        if (cols_ == 0) throw std::logic_error("matrix: no column to drop");
        std::vector<double> next(rows_ * (cols_ - 1));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j + 1 < cols_; ++j) next[i * (cols_ - 1) + j] = values_[i * cols_ + j];
        values_ = std::move(next);
        --cols_;
    }

    void drop_last_row() {
        if (rows_ == 0) throw std::logic_error("matrix: no row to drop");
        values_.resize(values_.size() - cols_);
        --rows_;
    }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool operator==(const Matrix& other) const = default;

private:
    static void check_finite(const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x))
                throw std::invalid_argument("matrix: non-finite entry");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2_sq(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(norm2_sq(a)); }

inline void scale(std::span<double> a, double s) {
    for (double& v : a) v *= s;
}

// In-place L2 normalization; throws if the vector is (numerically) zero.
inline void normalize(std::span<double> a) {
    const double n = norm2(a);
    if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
    scale(a, 1.0 / n);
}

}  // namespace bcode
