#include "ganpred/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ganpred::ad {

namespace {

[[noreturn]] void shape_fail(const std::string& what, const Tensor& a, const Tensor& b) {
    throw std::invalid_argument(what + ": shapes [" + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + "] and [" + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()) + "] are incompatible");
}

}  // namespace

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("Tensor: dimensions must be positive");
    }
}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("Tensor: dimensions must be positive");
    }
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("Tensor: data length " + std::to_string(data_.size()) +
                                    " does not match shape " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
}

Tensor Tensor::scalar(double v) { return Tensor(1, 1, std::vector<double>{v}); }

Tensor Tensor::row(std::initializer_list<double> values) {
    return Tensor(1, values.size(), std::vector<double>(values));
}

Tensor Tensor::row(std::vector<double> values) {
    return Tensor(1, values.size(), std::move(values));
}

bool Tensor::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.cols() != b.rows()) shape_fail("matmul", a, b);
    Tensor out(a.rows(), b.cols());
    // ikj order keeps the inner loop contiguous in both b and out.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Tensor transpose(const Tensor& m) {
    Tensor out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(j, i) = m(i, j);
        }
    }
    return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) shape_fail("add", a, b);
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

Tensor add_row_broadcast(const Tensor& a, const Tensor& b) {
    if (b.rows() != 1 || b.cols() != a.cols()) shape_fail("add_row_broadcast", a, b);
    Tensor out = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(i, j) += b[j];
        }
    }
    return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) shape_fail("sub", a, b);
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) shape_fail("hadamard", a, b);
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
    return out;
}

Tensor scaled(const Tensor& a, double factor) {
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factor;
    return out;
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
    if (a.rows() != b.rows()) shape_fail("concat_cols", a, b);
    Tensor out(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
    }
    return out;
}

Tensor slice_cols(const Tensor& m, std::size_t col_begin, std::size_t col_end) {
    if (col_begin >= col_end || col_end > m.cols()) {
        throw std::invalid_argument("slice_cols: range [" + std::to_string(col_begin) + ", " +
                                    std::to_string(col_end) + ") invalid for " +
                                    std::to_string(m.cols()) + " columns");
    }
    Tensor out(m.rows(), col_end - col_begin);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = col_begin; j < col_end; ++j) {
            out(i, j - col_begin) = m(i, j);
        }
    }
    return out;
}

Tensor column_sums(const Tensor& m) {
    Tensor out(1, m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[j] += m(i, j);
        }
    }
    return out;
}

double sum_all(const Tensor& m) {
    double total = 0.0;
    for (double v : m.data()) total += v;
    return total;
}

double mean_all(const Tensor& m) { return sum_all(m) / static_cast<double>(m.size()); }

Tensor softmax_rows(const Tensor& m) {
    Tensor out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double hi = m(i, 0);
        for (std::size_t j = 1; j < m.cols(); ++j) hi = std::max(hi, m(i, j));
        double total = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(i, j) = std::exp(m(i, j) - hi);
            total += out(i, j);
        }
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) /= total;
    }
    return out;
}

}  // namespace ganpred::ad
