#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ganpred::ad {

// Dense row-major matrix of 64-bit reals. Rank is fixed at 2: vectors are
// 1xN rows, scalars 1x1. Immutable by convention once placed on a Tape.
class Tensor {
public:
    Tensor() = default;
    Tensor(std::size_t rows, std::size_t cols, double fill = 0.0);
    Tensor(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Tensor scalar(double v);
    static Tensor row(std::initializer_list<double> values);
    static Tensor row(std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    std::array<std::size_t, 2> shape() const { return {rows_, cols_}; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    bool same_shape(const Tensor& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    bool all_finite() const;

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Plain matrix arithmetic. Shape mismatches throw std::invalid_argument.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& m);
Tensor add(const Tensor& a, const Tensor& b);
// a [n x m] plus row vector b [1 x m] added to every row.
Tensor add_row_broadcast(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b);
Tensor scaled(const Tensor& a, double factor);
Tensor concat_cols(const Tensor& a, const Tensor& b);
Tensor slice_cols(const Tensor& m, std::size_t col_begin, std::size_t col_end);
Tensor column_sums(const Tensor& m);  // 1 x cols
double sum_all(const Tensor& m);
double mean_all(const Tensor& m);
// Row-wise softmax with max subtraction.
Tensor softmax_rows(const Tensor& m);

}  // namespace ganpred::ad
