#pragma once

#include <utility>
#include <vector>

#include "carnot/error.hpp"
#include "carnot/rational.hpp"

namespace carnot {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

namespace detail {

inline void check_rectangular(const RationalMatrix& a) {
    for (const auto& row : a) {
        if (row.size() != a.front().size()) fail(ErrorKind::DimensionMismatch, "ragged matrix");
    }
}

/// In-place row echelon form by pivoted elimination. Returns the pivot columns and
/// accumulates the determinant factor (row swaps and pivots) into det.
inline std::vector<std::size_t> echelon(RationalMatrix& a, std::size_t columns, Rational& det) {
    std::vector<std::size_t> pivots;
    det = 1;
    std::size_t row = 0;
    for (std::size_t col = 0; col < columns && row < a.size(); ++col) {
        std::size_t pivot = row;
        while (pivot < a.size() && a[pivot][col] == 0) ++pivot;
        if (pivot == a.size()) {
            det = 0;
            continue;
        }
        if (pivot != row) {
            std::swap(a[pivot], a[row]);
            det = -det;
        }
        det *= a[row][col];
        for (std::size_t r = row + 1; r < a.size(); ++r) {
            if (a[r][col] == 0) continue;
            const Rational factor = a[r][col] / a[row][col];
            for (std::size_t c = col; c < a[r].size(); ++c) a[r][c] -= factor * a[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace detail

inline Rational determinant(RationalMatrix a) {
    if (a.empty()) return 1;
    detail::check_rectangular(a);
    if (a.size() != a.front().size()) fail(ErrorKind::DimensionMismatch, "determinant needs a square matrix");
    Rational det;
    const auto pivots = detail::echelon(a, a.size(), det);
    return pivots.size() == a.size() ? det : Rational(0);
}

inline std::size_t rank(RationalMatrix a) {
    if (a.empty()) return 0;
    detail::check_rectangular(a);
    Rational det;
    return detail::echelon(a, a.front().size(), det).size();
}

/// Unique solution of A x = v by pivoted exact elimination and back substitution.
inline RationalVector solve_exact(const RationalMatrix& a, const RationalVector& v) {
    const std::size_t n = a.size();
    if (n == 0 || v.size() != n) fail(ErrorKind::DimensionMismatch, "system size mismatch");
    detail::check_rectangular(a);
    if (a.front().size() != n) fail(ErrorKind::DimensionMismatch, "system matrix must be square");
    RationalMatrix aug = a;
    for (std::size_t i = 0; i < n; ++i) aug[i].push_back(v[i]);
    Rational det;
    const auto pivots = detail::echelon(aug, n, det);
    if (pivots.size() != n) fail(ErrorKind::SingularSystem, "system matrix is singular");
    RationalVector x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational sum = aug[i][n];
        for (std::size_t j = i + 1; j < n; ++j) sum -= aug[i][j] * x[j];
        x[i] = sum / aug[i][i];
    }
    return x;
}

}  // namespace carnot
