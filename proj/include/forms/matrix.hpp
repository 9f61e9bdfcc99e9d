#pragma once

#include "forms/rational.hpp"

#include <stdexcept>
#include <vector>

namespace forms {

// small dense exact matrices; row-major, rectangular
using Mat = std::vector<std::vector<Rat>>;

inline Mat mat_zero(int rows, int cols) {
    return Mat(rows, std::vector<Rat>(cols, Rat(0)));
}

inline Mat mat_identity(int n) {
    Mat m = mat_zero(n, n);
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline bool mat_is_zero(const Mat& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (x != 0) return false;
    return true;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
    const int n = static_cast<int>(a.size());
    const int k = n ? static_cast<int>(a[0].size()) : 0;
    if (k != static_cast<int>(b.size())) throw std::invalid_argument("mat_mul: shape mismatch");
    const int m = k ? static_cast<int>(b[0].size()) : 0;
    Mat out = mat_zero(n, m);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (int j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
        }
    return out;
}

// a + c*I
inline Mat mat_shift(const Mat& a, const Rat& c) {
    Mat out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i][i] += c;
    return out;
}

inline std::vector<Rat> mat_apply(const Mat& a, const std::vector<Rat>& v) {
    if (!a.empty() && a[0].size() != v.size())
        throw std::invalid_argument("mat_apply: shape mismatch");
    std::vector<Rat> out(a.size(), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (a[i][j] != 0 && v[j] != 0) out[i] += a[i][j] * v[j];
    return out;
}

// exact row reduction; consumes its copy
inline int mat_rank(Mat a) {
    const int rows = static_cast<int>(a.size());
    const int cols = rows ? static_cast<int>(a[0].size()) : 0;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][col] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(a[rank], a[pivot]);
        const Rat inv = Rat(1) / a[rank][col];
        for (int c = col; c < cols; ++c) a[rank][c] *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || a[r][col] == 0) continue;
            const Rat f = a[r][col];
            for (int c = col; c < cols; ++c) a[r][c] -= f * a[rank][c];
        }
        ++rank;
    }
    return rank;
}

// Gauss-Jordan inverse; throws on a singular input
inline Mat mat_inverse(const Mat& a) {
    const int n = static_cast<int>(a.size());
    Mat work = a;
    Mat inv = mat_identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (work[r][col] != 0) { pivot = r; break; }
        if (pivot < 0) throw std::domain_error("mat_inverse: singular matrix");
        std::swap(work[col], work[pivot]);
        std::swap(inv[col], inv[pivot]);
        const Rat d = Rat(1) / work[col][col];
        for (int c = 0; c < n; ++c) { work[col][c] *= d; inv[col][c] *= d; }
        for (int r = 0; r < n; ++r) {
            if (r == col || work[r][col] == 0) continue;
            const Rat f = work[r][col];
            for (int c = 0; c < n; ++c) {
                work[r][c] -= f * work[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

// integer variants: the annihilating-product checks stay integral, and
// integer arithmetic is much faster than normalizing rationals
using IMat = std::vector<std::vector<Int>>;

inline IMat imat_zero(int rows, int cols) {
    return IMat(rows, std::vector<Int>(cols, Int(0)));
}

inline IMat imat_mul(const IMat& a, const IMat& b) {
    const int n = static_cast<int>(a.size());
    const int k = n ? static_cast<int>(a[0].size()) : 0;
    if (k != static_cast<int>(b.size())) throw std::invalid_argument("imat_mul: shape mismatch");
    const int m = k ? static_cast<int>(b[0].size()) : 0;
    IMat out = imat_zero(n, m);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (int j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
        }
    return out;
}

inline IMat imat_shift(const IMat& a, const Int& c) {
    IMat out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i][i] += c;
    return out;
}

inline bool imat_is_zero(const IMat& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (x != 0) return false;
    return true;
}

} // namespace forms
