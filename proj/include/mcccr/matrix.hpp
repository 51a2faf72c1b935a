#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcccr {

/// Error raised for every contract violation in the library. The message
/// always names the offending quantity.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using FeatureVector = std::vector<double>;

/// Dense row-major matrix; one row per observation. A matrix with zero rows
/// still carries its column count so empty collections keep their
/// dimensionality.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m;
        for (const auto& r : rows) {
            m.append_row(std::span<const double>(r.begin(), r.size()));
        }
        return m;
    }

    static Matrix from_rows(const std::vector<FeatureVector>& rows, std::size_t cols = 0) {
        Matrix m(0, rows.empty() ? cols : rows.front().size());
        for (const auto& r : rows) m.append_row(r);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) {
        return {data_.data() + i * cols_, cols_};
    }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    void reserve_rows(std::size_t n) { data_.reserve(n * cols_); }

    void append_row(std::span<const double> values) {
        if (rows_ == 0 && cols_ == 0) {
            cols_ = values.size();
        } else if (values.size() != cols_) {
            throw Error("row length " + std::to_string(values.size()) +
                        " does not match matrix width " + std::to_string(cols_));
        }
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    void append_rows(const Matrix& other) {
        for (std::size_t i = 0; i < other.rows(); ++i) append_row(other.row(i));
        if (rows_ == 0 && cols_ == 0) cols_ = other.cols();
    }

    Matrix select_rows(std::span<const std::size_t> idx) const {
        Matrix out(0, cols_);
        out.reserve_rows(idx.size());
        for (std::size_t i : idx) out.append_row(row(i));
        return out;
    }

    const std::vector<double>& data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace mcccr
