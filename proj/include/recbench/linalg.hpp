#pragma once

#include <cstddef>
#include <span>

namespace recbench::linalg {

// Dense helpers over row-major matrices. Hot loops of the trainable models;
// kept branch-free and contiguous so -O3 vectorizes them.

/// y += W x   (W: rows x cols, x: cols, y: rows)
template <typename T>
inline void matvec_acc(std::span<const T> w, int rows, int cols, const T* x, T* y) {
    for (int i = 0; i < rows; ++i) {
        const T* row = w.data() + static_cast<size_t>(i) * static_cast<size_t>(cols);
        T acc = T(0);
        for (int j = 0; j < cols; ++j) acc += row[j] * x[j];
        y[i] += acc;
    }
}

/// y += W^T x   (W: rows x cols, x: rows, y: cols)
template <typename T>
inline void matvec_transpose_acc(std::span<const T> w, int rows, int cols, const T* x, T* y) {
    for (int i = 0; i < rows; ++i) {
        const T* row = w.data() + static_cast<size_t>(i) * static_cast<size_t>(cols);
        const T xi = x[i];
        for (int j = 0; j < cols; ++j) y[j] += row[j] * xi;
    }
}

/// W += a b^T   (W: rows x cols, a: rows, b: cols)
template <typename T>
inline void outer_acc(std::span<T> w, int rows, int cols, const T* a, const T* b) {
    for (int i = 0; i < rows; ++i) {
        T* row = w.data() + static_cast<size_t>(i) * static_cast<size_t>(cols);
        const T ai = a[i];
        for (int j = 0; j < cols; ++j) row[j] += ai * b[j];
    }
}

template <typename T>
inline void axpy(int n, T alpha, const T* x, T* y) {
    for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
inline T dot(int n, const T* a, const T* b) {
    T acc = T(0);
    for (int i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

} // namespace recbench::linalg
