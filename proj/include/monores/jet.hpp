// Jets: multivariate polynomials / truncated power series over exact rationals,
// with the substitution operations the resolution needs. Coefficient maps are
// ordered (lex on exponents), so every operation is deterministic.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "monores/multiindex.hpp"
#include "monores/rational.hpp"

namespace monores {

struct PrecisionExhausted : std::runtime_error {
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};
struct SingularMatrix : std::runtime_error {
    explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

// order_of_vanishing result. Infinite only for Exact zero jets; a stored-zero
// truncated jet can only claim "nothing below D".
struct Order {
    enum Kind { Finite, Infinite, BeyondPrecision };
    Kind kind = Finite;
    int value = 0;

    bool is_finite() const { return kind == Finite; }
    bool operator==(const Order& o) const { return kind == o.kind && value == o.value; }
};

using IMatrix = std::vector<std::vector<long long>>;  // row m = exponents of the monomial substituted for x_m

inline Int imatrix_det(const IMatrix& a) {
    std::size_t n = a.size();
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = Rat(Int(a[i][j]), Int(1));
    Rat det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == Rat(0)) ++p;
        if (p == n) return Int(0);
        if (p != c) { std::swap(m[p], m[c]); det = -det; }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == Rat(0)) continue;
            Rat f = m[r][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    if (det.denominator() != 1) throw std::logic_error("integer matrix det not integer");
    return det.numerator();
}

class Jet {
public:
    Jet() : n_(1) {}
    explicit Jet(std::size_t n, std::optional<int> trunc = std::nullopt) : n_(n), trunc_(trunc) {}

    static Jet constant(std::size_t n, const Rat& c) {
        Jet j(n);
        j.add_term(MultiIndex(n), c);
        return j;
    }
    static Jet variable(std::size_t n, std::size_t axis1) {  // axis is 1-based
        Jet j(n);
        MultiIndex m(n);
        m[axis1 - 1] = 1;
        j.add_term(m, Rat(1));
        return j;
    }
    static Jet monomial(std::size_t n, const MultiIndex& m, const Rat& c) {
        Jet j(n);
        j.add_term(m, c);
        return j;
    }

    std::size_t dim() const { return n_; }
    bool is_exact() const { return !trunc_.has_value(); }
    std::optional<int> truncation() const { return trunc_; }
    const std::map<MultiIndex, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rat coefficient(const MultiIndex& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(const MultiIndex& m, const Rat& c) {
        if (m.dim() != n_) throw std::invalid_argument("multi-index dimension mismatch");
        if (!m.all_nonnegative()) throw std::invalid_argument("negative exponent in jet term");
        if (trunc_ && m.degree() > *trunc_) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (c != Rat(0)) terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == Rat(0)) terms_.erase(it);
        }
    }

    Jet truncated_to(int d) const {
        Jet r(n_, trunc_ ? std::min(*trunc_, d) : d);
        for (auto& [m, c] : terms_) r.add_term(m, c);
        return r;
    }
    // Drop the truncation marker; caller asserts the jet is genuinely polynomial.
    Jet as_exact() const {
        Jet r(n_);
        for (auto& [m, c] : terms_) r.add_term(m, c);
        return r;
    }

    Jet operator-() const {
        Jet r(n_, trunc_);
        for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    Jet operator+(const Jet& o) const {
        Jet r(n_, merge_trunc(o));
        for (auto& [m, c] : terms_) r.add_term(m, c);
        for (auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    Jet operator-(const Jet& o) const { return *this + (-o); }
    Jet operator*(const Jet& o) const {
        Jet r(n_, merge_trunc(o));
        for (auto& [ma, ca] : terms_)
            for (auto& [mb, cb] : o.terms_) r.add_term(ma + mb, ca * cb);
        return r;
    }
    Jet operator*(const Rat& s) const {
        Jet r(n_, trunc_);
        if (s == Rat(0)) return r;
        for (auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
        return r;
    }
    bool operator==(const Jet& o) const { return n_ == o.n_ && terms_ == o.terms_; }

    Jet pow(int k) const {
        Jet r = constant(n_, Rat(1));
        if (trunc_) r = r.truncated_to(*trunc_);
        for (int i = 0; i < k; ++i) r = r * (*this);
        return r;
    }

    int max_degree() const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    Order order_of_vanishing() const {
        if (terms_.empty()) {
            if (trunc_) return Order{Order::BeyondPrecision, *trunc_};
            return Order{Order::Infinite, 0};
        }
        int best = terms_.begin()->first.degree();
        for (auto& [m, c] : terms_) best = std::min(best, m.degree());
        return Order{Order::Finite, best};
    }

    // Smallest k with a nonzero pure x_axis^k coefficient; nullopt if none stored.
    std::optional<int> directional_order(std::size_t axis1) const {
        std::optional<int> best;
        for (auto& [m, c] : terms_) {
            bool pure = true;
            for (std::size_t i = 0; i < n_; ++i)
                if (i != axis1 - 1 && m[i] != 0) { pure = false; break; }
            if (pure && (!best || m[axis1 - 1] < *best)) best = m[axis1 - 1];
        }
        return best;
    }

    Jet partial_derivative(std::size_t axis1) const {
        std::optional<int> t = trunc_ ? std::optional<int>(*trunc_ - 1) : std::nullopt;
        Jet r(n_, t);
        for (auto& [m, c] : terms_) {
            if (m[axis1 - 1] == 0) continue;
            MultiIndex d = m;
            d[axis1 - 1] -= 1;
            r.add_term(d, c * Rat(m[axis1 - 1]));
        }
        return r;
    }

    // f composed with the monomial map whose m-th component is prod_i x_i^{A_mi}:
    // term x^a goes to x^{A^T a}.
    Jet substitute_monomial_map(const IMatrix& a) const {
        if (a.size() != n_) throw std::invalid_argument("monomial map size mismatch");
        for (auto& row : a) {
            if (row.size() != n_) throw std::invalid_argument("monomial map size mismatch");
            for (long long v : row)
                if (v < 0) throw std::invalid_argument("monomial map with negative exponent");
        }
        if (imatrix_det(a) == 0) throw SingularMatrix("monomial map matrix is singular");
        long long min_row_sum = 0;
        for (std::size_t m = 0; m < n_; ++m) {
            long long s = 0;
            for (std::size_t i = 0; i < n_; ++i) s += a[m][i];
            min_row_sum = (m == 0) ? s : std::min(min_row_sum, s);
        }
        std::optional<int> t = trunc_ ? std::optional<int>(static_cast<int>(*trunc_ * std::max(1LL, min_row_sum)))
                                      : std::nullopt;
        Jet r(n_, t);
        for (auto& [mi, c] : terms_) {
            MultiIndex im(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                long long v = 0;
                for (std::size_t m = 0; m < n_; ++m) v += a[m][i] * mi[m];
                im[i] = static_cast<int>(v);
            }
            r.add_term(im, c);
        }
        return r;
    }

    // Taylor re-expansion of f(x + w) around 0.
    Jet substitute_translation(const std::vector<Rat>& w) const {
        if (w.size() != n_) throw std::invalid_argument("translation vector size mismatch");
        Jet cur = *this;
        for (std::size_t i = 0; i < n_; ++i) {
            if (w[i] == Rat(0)) continue;
            Jet next(n_, cur.trunc_);
            for (auto& [m, c] : cur.terms_) {
                int k = m[i];
                // (x_i + w_i)^k expanded with binomials
                Rat binom(1);
                Rat wp(1);
                for (int j = k; j >= 0; --j) {
                    MultiIndex t = m;
                    t[i] = j;
                    next.add_term(t, c * binom * wp);
                    binom = binom * Rat(j) / Rat(k - j + 1);
                    wp *= w[i];
                }
            }
            cur = next;
        }
        return cur;
    }

    // f with x_axis replaced by the jet s (same ambient dimension).
    Jet substitute_axis(std::size_t axis1, const Jet& s) const {
        if (s.dim() != n_) throw std::invalid_argument("substitute_axis dimension mismatch");
        std::optional<int> t = merge_trunc(s);
        // group by x_axis power, then Horner in s
        int kmax = 0;
        for (auto& [m, c] : terms_) kmax = std::max(kmax, m[axis1 - 1]);
        std::vector<Jet> coeffs(kmax + 1, Jet(n_, t));
        for (auto& [m, c] : terms_) {
            MultiIndex rest = m;
            int k = rest[axis1 - 1];
            rest[axis1 - 1] = 0;
            coeffs[k].add_term(rest, c);
        }
        Jet acc(n_, t);
        for (int k = kmax; k >= 0; --k) acc = acc * s + coeffs[k];
        if (!t) acc = acc.as_exact();
        return acc;
    }

    // x_axis -> x_axis + r(other variables); r lives in n-1 variables (original
    // order with the axis removed) and must have r(0) = 0.
    Jet substitute_quasi_translation(const Jet& r, std::size_t axis1) const {
        if (r.dim() != n_ - 1) throw std::invalid_argument("quasi-translation series dimension mismatch");
        if (r.coefficient(MultiIndex(n_ - 1)) != Rat(0))
            throw std::invalid_argument("quasi-translation series must vanish at 0");
        Jet emb(n_, r.truncation());
        for (auto& [m, c] : r.terms()) {
            MultiIndex t(n_);
            for (std::size_t i = 0, j = 0; i < n_; ++i)
                if (i != axis1 - 1) t[i] = m[j++];
            emb.add_term(t, c);
        }
        std::optional<int> t = merge_trunc(emb);
        if (t && *t < 1)
            throw PrecisionExhausted("quasi-translation cannot certify any terms at working degree");
        return substitute_axis(axis1, Jet::variable(n_, axis1) + emb);
    }

    double evaluate(const std::vector<double>& p) const {
        if (p.size() != n_) throw std::invalid_argument("evaluation point size mismatch");
        double acc = 0;
        for (auto& [m, c] : terms_) {
            double t = to_double(c);
            for (std::size_t i = 0; i < n_; ++i)
                for (int k = 0; k < m[i]; ++k) t *= p[i];
            acc += t;
        }
        return acc;
    }

    Rat evaluate_exact(const std::vector<Rat>& p) const {
        if (p.size() != n_) throw std::invalid_argument("evaluation point size mismatch");
        Rat acc(0);
        for (auto& [m, c] : terms_) {
            Rat t = c;
            for (std::size_t i = 0; i < n_; ++i)
                for (int k = 0; k < m[i]; ++k) t *= p[i];
            acc += t;
        }
        return acc;
    }

    // Exact division by x^m; throws if some term is not divisible.
    Jet divide_monomial(const MultiIndex& m) const {
        Jet r(n_, trunc_ ? std::optional<int>(*trunc_ - m.degree()) : std::nullopt);
        for (auto& [t, c] : terms_) {
            if (!t.dominates(m)) throw std::domain_error("monomial does not divide jet");
            r.add_term(t - m, c);
        }
        return r;
    }

    // Componentwise minimum of all exponents: the largest monomial dividing f.
    MultiIndex content() const {
        MultiIndex m(n_);
        if (terms_.empty()) return m;
        bool first = true;
        for (auto& [t, c] : terms_) {
            if (first) { m = t; first = false; continue; }
            for (std::size_t i = 0; i < n_; ++i) m[i] = std::min(m[i], t[i]);
        }
        return m;
    }

    std::string str(const std::vector<std::string>& vars = {}) const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            std::string mono;
            for (std::size_t i = 0; i < n_; ++i) {
                if (m[i] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += (i < vars.size() ? vars[i] : "x" + std::to_string(i + 1));
                if (m[i] > 1) mono += "^" + std::to_string(m[i]);
            }
            if (mono.empty()) out += to_string(c);
            else if (c == Rat(1)) out += mono;
            else out += to_string(c) + "*" + mono;
        }
        return out;
    }

private:
    std::optional<int> merge_trunc(const Jet& o) const {
        if (trunc_ && o.trunc_) return std::min(*trunc_, *o.trunc_);
        if (trunc_) return trunc_;
        return o.trunc_;
    }

    std::size_t n_;
    std::map<MultiIndex, Rat> terms_;
    std::optional<int> trunc_;
};

inline Jet operator*(const Rat& s, const Jet& j) { return j * s; }

}  // namespace monores
