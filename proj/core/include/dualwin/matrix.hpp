#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dualwin {

using cdouble = std::complex<double>;

/// Dense row-major matrix. Row index is the subcarrier / delay axis,
/// column index the symbol / Doppler axis.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) noexcept {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    const T& operator()(std::size_t r, std::size_t c) const noexcept {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<T> flat() noexcept { return data_; }
    std::span<const T> flat() const noexcept { return data_; }

    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

enum class FrameRole { transmitted, received, normalized };

/// N x M grid of complex values; the role tag records which stage produced it.
struct ComplexFrame {
    FrameRole role = FrameRole::transmitted;
    Matrix<cdouble> data;

    std::size_t n_subcarriers() const noexcept { return data.rows(); }
    std::size_t n_symbols() const noexcept { return data.cols(); }
};

double frame_energy(const ComplexFrame& f) noexcept;

}  // namespace dualwin
