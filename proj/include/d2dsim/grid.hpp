// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace d2dsim {

/// Dense row-major 2-D array. The workhorse container for the |C|x|C|
/// matrices (nu, zeta, N*, compartment planes); rows are contiguous so the
/// SIMD kernels can run over them directly.
template <class T>
class Grid {
public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return v_.empty(); }

    T& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return v_[i * cols_ + j];
    }
    const T& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return v_[i * cols_ + j];
    }

    T* row(std::size_t i) { return v_.data() + i * cols_; }
    const T* row(std::size_t i) const { return v_.data() + i * cols_; }
    std::span<T> row_span(std::size_t i) { return {row(i), cols_}; }
    std::span<const T> row_span(std::size_t i) const { return {row(i), cols_}; }

    std::vector<T>& data() { return v_; }
    const std::vector<T>& data() const { return v_; }

    void fill(T x) { v_.assign(v_.size(), x); }

    bool operator==(const Grid&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> v_;
};

using Mat = Grid<double>;
using CountMat = Grid<std::int64_t>;

} // namespace d2dsim
