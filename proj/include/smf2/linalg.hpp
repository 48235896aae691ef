#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "smf2/rational.hpp"

namespace smf2 {

// Dense exact-rational matrix, row-major.
struct MatQ {
    std::size_t rows = 0, cols = 0;
    std::vector<Rat> a;

    MatQ() = default;
    MatQ(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Rat(0)) {}

    Rat& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// In-place reduced row echelon form; returns pivot columns.
inline std::vector<std::size_t> rref(MatQ& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t piv = row;
        while (piv < m.rows && m.at(piv, col) == 0) ++piv;
        if (piv == m.rows) continue;
        for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(row, j));
        Rat inv = Rat(1) / m.at(row, col);
        for (std::size_t j = col; j < m.cols; ++j) m.at(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || m.at(i, col) == 0) continue;
            Rat f = m.at(i, col);
            for (std::size_t j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(MatQ m) { return rref(m).size(); }

// Basis of the right null space, as column vectors.
inline std::vector<std::vector<Rat>> kernel(MatQ m) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Rat>> basis;
    for (std::size_t free_col = 0; free_col < m.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rat> v(m.cols, Rat(0));
        v[free_col] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(r, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve A x = b exactly; nullopt when inconsistent.  When the system is
// underdetermined, returns the solution with free variables set to zero.
inline std::optional<std::vector<Rat>> solve(const MatQ& A, const std::vector<Rat>& b) {
    if (b.size() != A.rows) throw std::invalid_argument("solve: size mismatch");
    MatQ m(A.rows, A.cols + 1);
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < A.cols; ++j) m.at(i, j) = A.at(i, j);
        m.at(i, A.cols) = b[i];
    }
    auto pivots = rref(m);
    if (!pivots.empty() && pivots.back() == A.cols) return std::nullopt;  // 0 = 1 row
    std::vector<Rat> x(A.cols, Rat(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m.at(r, A.cols);
    return x;
}

// Characteristic polynomial det(X I - A) by Faddeev-LeVerrier.
// Returned coefficients are monic, highest degree first.
inline std::vector<Rat> charpoly(const MatQ& A) {
    if (A.rows != A.cols) throw std::invalid_argument("charpoly: not square");
    std::size_t n = A.rows;
    std::vector<Rat> c(n + 1, Rat(0));
    c[0] = 1;
    MatQ M(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A*M_{k-1} + c_{k-1} I
        MatQ next(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Rat s(0);
                for (std::size_t l = 0; l < n; ++l) s += A.at(i, l) * M.at(l, j);
                next.at(i, j) = s;
            }
        for (std::size_t i = 0; i < n; ++i) next.at(i, i) += c[k - 1];
        // c_k = -(1/k) tr(A * M_k)
        Rat tr(0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) tr += A.at(i, l) * next.at(l, i);
        c[k] = -tr / Rat((long)k);
        M = std::move(next);
    }
    return c;
}

// Discriminant of a polynomial with rational coefficients (highest first),
// via the Sylvester resultant of f and f'.
inline Rat poly_discriminant(const std::vector<Rat>& f) {
    std::size_t n = f.size() - 1;  // degree
    if (n < 1) throw std::invalid_argument("poly_discriminant: degree < 1");
    std::vector<Rat> df(n);
    for (std::size_t i = 0; i < n; ++i) df[i] = f[i] * Rat((long)(n - i));
    std::size_t m = n - 1;
    std::size_t size = n + m;
    MatQ S(size, size);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= n; ++j) S.at(i, i + j) = f[j];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= m; ++j) S.at(m + i, i + j) = df[j];
    // det via fraction-free-ish Gaussian elimination over Q
    Rat det(1);
    MatQ A = S;
    for (std::size_t col = 0, row = 0; col < size && row < size; ++col, ++row) {
        std::size_t piv = row;
        while (piv < size && A.at(piv, col) == 0) ++piv;
        if (piv == size) return Rat(0);
        if (piv != row) {
            for (std::size_t j = 0; j < size; ++j) std::swap(A.at(piv, j), A.at(row, j));
            det = -det;
        }
        det *= A.at(row, col);
        Rat inv = Rat(1) / A.at(row, col);
        for (std::size_t i = row + 1; i < size; ++i) {
            if (A.at(i, col) == 0) continue;
            Rat fct = A.at(i, col) * inv;
            for (std::size_t j = col; j < size; ++j) A.at(i, j) -= fct * A.at(row, j);
        }
    }
    Rat res = det;  // lc(f)=1 cases dominate here; keep the general scaling anyway
    Rat lc = f[0];
    Rat disc = res / lc;
    // sign (-1)^{n(n-1)/2}
    if (((n * (n - 1)) / 2) % 2 == 1) disc = -disc;
    return disc;
}

}  // namespace smf2
