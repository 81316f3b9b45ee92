#include "monores/applications.hpp"

#include <algorithm>
#include <map>

namespace monores {
namespace {

// a . eps < b (strict) or <= b
struct LinIneq {
    std::vector<Rat> a;
    Rat b;
    bool strict;
};

// Exact Fourier-Motzkin feasibility over R^m. Fine for the handful of
// variables and inequalities we ever see here.
bool fm_feasible(std::vector<LinIneq> sys, std::size_t m) {
    for (std::size_t v = 0; v < m; ++v) {
        std::vector<LinIneq> lower, upper, rest;
        for (auto& iq : sys) {
            if (iq.a[v] > Rat(0))
                upper.push_back(iq);
            else if (iq.a[v] < Rat(0))
                lower.push_back(iq);
            else
                rest.push_back(iq);
        }
        for (auto& lo : lower)
            for (auto& up : upper) {
                // scale so the v coefficients cancel
                Rat cl = -lo.a[v], cu = up.a[v];
                LinIneq nw;
                nw.a.resize(m);
                for (std::size_t j = 0; j < m; ++j) nw.a[j] = cu * lo.a[j] + cl * up.a[j];
                nw.b = cu * lo.b + cl * up.b;
                nw.strict = lo.strict || up.strict;
                rest.push_back(std::move(nw));
            }
        sys = std::move(rest);
    }
    for (auto& iq : sys) {
        if (iq.b < Rat(0)) return false;
        if (iq.b == Rat(0) && iq.strict) return false;
    }
    return true;
}

// primitive integer scaling of (s, t), for deduplication
std::vector<Int> normal_form(const PolytopeInequality& iq) {
    Int l = 1;
    for (auto& v : iq.s) l = boost::integer::lcm(l, v.denominator());
    l = boost::integer::lcm(l, iq.t.denominator());
    std::vector<Int> key;
    Int g = 0;
    for (auto& v : iq.s) {
        Int w = v.numerator() * (l / v.denominator());
        key.push_back(w);
        g = boost::integer::gcd(g, w);
    }
    Int w = iq.t.numerator() * (l / iq.t.denominator());
    key.push_back(w);
    g = boost::integer::gcd(g, w);
    if (g > 1)
        for (auto& k : key) k /= g;
    return key;
}

Rat eval_lhs(const PolytopeInequality& iq, const std::vector<Rat>& eps) {
    Rat v(0);
    for (std::size_t l = 0; l < iq.s.size(); ++l) v += iq.s[l] * eps[l];
    return v;
}

}  // namespace

ExponentPolytope integrability_polytope(const ResolutionResult& res) {
    if (!res.fully_resolved())
        throw UnresolvedCharts("resolution has unresolved or precision-starved charts");
    ExponentPolytope p;
    p.m = res.fs.size();
    auto ls = res.leaves();
    for (std::size_t li = 0; li < ls.size(); ++li) {
        const ChartNode* leaf = ls[li];
        if (leaf->status != ChartStatus::Terminal) continue;
        std::size_t n = leaf->jac_form.exponents.dim();
        for (std::size_t k = 0; k < n; ++k) {
            PolytopeInequality iq;
            bool nontrivial = false;
            for (std::size_t l = 0; l < p.m; ++l) {
                int e = leaf->f_forms[l].exponents[k];
                iq.s.push_back(Rat(e));
                if (e != 0) nontrivial = true;
            }
            if (!nontrivial) continue;  // 0 < t + 1 always holds
            iq.t = Rat(leaf->jac_form.exponents[k] + 1);
            iq.leaf = li;
            iq.axis = k;
            p.inequalities.push_back(std::move(iq));
        }
    }
    return p;
}

ExponentPolytope prune(const ExponentPolytope& p) {
    ExponentPolytope out;
    out.m = p.m;
    std::map<std::vector<Int>, std::size_t> seen;
    for (auto& iq : p.inequalities)
        if (seen.emplace(normal_form(iq), out.inequalities.size()).second)
            out.inequalities.push_back(iq);
    if (p.m > 3) return out;  // dedupe only

    std::vector<bool> kept(out.inequalities.size(), true);
    for (std::size_t i = 0; i < out.inequalities.size(); ++i) {
        // redundant iff the others cannot be satisfied together with its negation
        std::vector<LinIneq> sys;
        for (std::size_t j = 0; j < out.inequalities.size(); ++j) {
            if (j == i || !kept[j]) continue;
            sys.push_back({out.inequalities[j].s, out.inequalities[j].t, true});
        }
        LinIneq neg;
        for (auto& v : out.inequalities[i].s) neg.a.push_back(-v);
        neg.b = -out.inequalities[i].t;
        neg.strict = false;
        sys.push_back(std::move(neg));
        if (!fm_feasible(std::move(sys), p.m)) kept[i] = false;
    }
    ExponentPolytope fin;
    fin.m = p.m;
    for (std::size_t i = 0; i < out.inequalities.size(); ++i)
        if (kept[i]) fin.inequalities.push_back(out.inequalities[i]);
    return fin;
}

Rat lct(const ExponentPolytope& p) {
    bool any = false;
    Rat best(0);
    for (auto& iq : p.inequalities) {
        Rat sum(0);
        for (auto& v : iq.s) sum += v;
        if (sum <= Rat(0)) continue;
        Rat r = iq.t / sum;
        if (!any || r < best) best = r, any = true;
    }
    if (!any) throw std::runtime_error("no inequality constrains the diagonal");
    return best;
}

Rat lct(const ResolutionResult& res) { return lct(integrability_polytope(res)); }

Integrability check_integrability(const ExponentPolytope& p, const std::vector<Rat>& eps) {
    if (eps.size() != p.m) throw std::invalid_argument("epsilon dimension mismatch");
    bool boundary = false;
    for (auto& iq : p.inequalities) {
        Rat v = eval_lhs(iq, eps);
        if (v > iq.t) return Integrability::Infinite;
        if (v == iq.t) boundary = true;
    }
    if (!boundary) return Integrability::Finite;
    // sharp threshold: for a single function the critical integral diverges
    return p.m == 1 ? Integrability::Infinite : Integrability::Boundary;
}

LojasiewiczResult lojasiewicz_exponent(const ResolutionResult& res) {
    if (res.fs.size() != 2)
        throw std::invalid_argument("lojasiewicz_exponent needs exactly two functions");
    if (!res.fully_resolved())
        throw UnresolvedCharts("resolution has unresolved or precision-starved charts");
    LojasiewiczResult out;
    auto ls = res.leaves();
    for (std::size_t li = 0; li < ls.size(); ++li) {
        const ChartNode* leaf = ls[li];
        if (leaf->status != ChartStatus::Terminal) continue;
        std::size_t n = leaf->jac_form.exponents.dim();
        for (std::size_t k = 0; k < n; ++k) {
            int alpha = leaf->f_forms[0].exponents[k];
            int beta = leaf->f_forms[1].exponents[k];
            if (beta > 0 && alpha == 0) throw ContainmentViolated(li, k);
            if (alpha == 0) continue;
            Rat r(beta, alpha);
            if (r > out.mu) {
                out.mu = r;
                out.leaf = li;
                out.axis = k;
            }
        }
    }
    return out;
}

}  // namespace monores
