// Multi-index of exponents; the "a" of g(x) = sum_a c_a x^a.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace monores {

struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(std::size_t n) : e(n, 0) {}
    MultiIndex(std::initializer_list<int> init) : e(init) {}

    std::size_t dim() const { return e.size(); }
    int operator[](std::size_t i) const { return e[i]; }
    int& operator[](std::size_t i) { return e[i]; }

    int degree() const {
        int d = 0;
        for (int v : e) d += v;
        return d;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (std::size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
        return r;
    }
    MultiIndex operator-(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (std::size_t i = 0; i < e.size(); ++i) r.e[i] -= o.e[i];
        return r;
    }
    bool operator==(const MultiIndex& o) const { return e == o.e; }
    bool operator!=(const MultiIndex& o) const { return e != o.e; }
    // Lexicographic; gives the deterministic term order used everywhere.
    bool operator<(const MultiIndex& o) const { return e < o.e; }

    bool all_nonnegative() const {
        for (int v : e) if (v < 0) return false;
        return true;
    }
    // True iff *this lies in the shifted orthant S_o = {x : x_i >= o_i}.
    bool dominates(const MultiIndex& o) const {
        for (std::size_t i = 0; i < e.size(); ++i) if (e[i] < o.e[i]) return false;
        return true;
    }
};

inline std::string to_string(const MultiIndex& m) {
    std::string s = "(";
    for (std::size_t i = 0; i < m.dim(); ++i) {
        if (i) s += ",";
        s += std::to_string(m[i]);
    }
    return s + ")";
}

}  // namespace monores
