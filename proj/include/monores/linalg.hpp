// Small dense exact-rational linear algebra: just what the convex geometry needs.
#pragma once

#include <boost/integer/common_factor.hpp>
#include <optional>
#include <vector>

#include "monores/rational.hpp"

namespace monores {

using RVec = std::vector<Rat>;
using RMat = std::vector<RVec>;  // row-major

inline Rat dot(const RVec& a, const RVec& b) {
    Rat s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline std::size_t rank(RMat m) {
    std::size_t rows = m.size();
    if (rows == 0) return 0;
    std::size_t cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == Rat(0)) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == Rat(0)) continue;
            Rat f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

// Nullspace basis of m (vectors v with m v = 0).
inline std::vector<RVec> nullspace(RMat m) {
    std::size_t rows = m.size();
    std::size_t cols = rows ? m[0].size() : 0;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == Rat(0)) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rat pv = m[r][c];
        for (std::size_t j = 0; j < cols; ++j) m[r][j] /= pv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == Rat(0)) continue;
            Rat f = m[i][c];
            for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<RVec> basis;
    for (std::size_t free_c = 0; free_c < cols; ++free_c) {
        if (is_pivot[free_c]) continue;
        RVec v(cols, Rat(0));
        v[free_c] = Rat(1);
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -m[i][free_c];
        basis.push_back(v);
    }
    return basis;
}

// Inverse of a square matrix; nullopt if singular.
inline std::optional<RMat> inverse(RMat m) {
    std::size_t n = m.size();
    RMat inv(n, RVec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = Rat(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == Rat(0)) ++p;
        if (p == n) return std::nullopt;
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        Rat pv = m[c][c];
        for (std::size_t j = 0; j < n; ++j) { m[c][j] /= pv; inv[c][j] /= pv; }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c] == Rat(0)) continue;
            Rat f = m[i][c];
            for (std::size_t j = 0; j < n; ++j) { m[i][j] -= f * m[c][j]; inv[i][j] -= f * inv[c][j]; }
        }
    }
    return inv;
}

// Scale a rational vector to a primitive integer vector (preserving direction).
inline std::vector<Int> primitive_integer(const RVec& v) {
    Int lcm(1);
    for (auto& x : v) lcm = boost::integer::lcm(lcm, x.denominator());
    std::vector<Int> w;
    Int g(0);
    for (auto& x : v) {
        Int t = x.numerator() * (lcm / x.denominator());
        w.push_back(t);
        g = boost::integer::gcd(g, t);
    }
    if (g != 0)
        for (auto& t : w) t /= g;
    return w;
}

}  // namespace monores
