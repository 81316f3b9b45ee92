#include "monores/charts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace monores {
namespace {

double mono_eval(const std::vector<double>& x, const MultiIndex& m, double coef) {
    double v = coef;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (int k = 0; k < m[i]; ++k) v *= x[i];
    return v;
}

Jet det_jet(const CoordinateChange& s, std::size_t n) {
    if (auto* r = std::get_if<Reflection>(&s)) {
        Rat sign = (r->axes.size() % 2 == 0) ? Rat(1) : Rat(-1);
        return Jet::constant(n, sign);
    }
    if (std::get_if<Translation>(&s) || std::get_if<QuasiTranslationStep>(&s))
        return Jet::constant(n, Rat(1));
    const auto& a = std::get<MonomialMapStep>(s).a;
    MultiIndex m(n);
    for (std::size_t i = 0; i < n; ++i) {
        long long cs = 0;
        for (std::size_t r2 = 0; r2 < n; ++r2) cs += a[r2][i];
        m[i] = static_cast<int>(cs - 1);
    }
    return Jet::monomial(n, m, Rat(imatrix_det(a)));
}

}  // namespace

Jet push_jet(const Jet& f, const CoordinateChange& s) {
    if (auto* r = std::get_if<Reflection>(&s)) {
        Jet out(f.dim(), f.truncation());
        for (auto& [m, c] : f.terms()) {
            int par = 0;
            for (auto a : r->axes) par += m[a - 1];
            out.add_term(m, (par % 2 == 0) ? c : -c);
        }
        return out;
    }
    if (auto* t = std::get_if<Translation>(&s)) return f.substitute_translation(t->w);
    if (auto* q = std::get_if<QuasiTranslationStep>(&s))
        return f.substitute_quasi_translation(q->r, q->axis);
    return f.substitute_monomial_map(std::get<MonomialMapStep>(s).a);
}

Jet push_jet(Jet f, const std::vector<CoordinateChange>& steps) {
    for (auto& s : steps) f = push_jet(f, s);
    return f;
}

std::vector<double> apply_steps(const std::vector<CoordinateChange>& steps, std::vector<double> z) {
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        if (auto* r = std::get_if<Reflection>(&*it)) {
            for (auto a : r->axes) z[a - 1] = -z[a - 1];
        } else if (auto* t = std::get_if<Translation>(&*it)) {
            for (std::size_t i = 0; i < z.size(); ++i) z[i] += to_double(t->w[i]);
        } else if (auto* q = std::get_if<QuasiTranslationStep>(&*it)) {
            std::vector<double> other;
            for (std::size_t i = 0; i < z.size(); ++i)
                if (i != q->axis - 1) other.push_back(z[i]);
            z[q->axis - 1] += q->r.evaluate(other);
        } else {
            const auto& a = std::get<MonomialMapStep>(*it).a;
            std::vector<double> x(z.size());
            for (std::size_t m = 0; m < z.size(); ++m) {
                double v = 1;
                for (std::size_t i = 0; i < z.size(); ++i)
                    for (long long k = 0; k < a[m][i]; ++k) v *= z[i];
                x[m] = v;
            }
            z = x;
        }
    }
    return z;
}

std::optional<std::vector<double>> invert_steps(const std::vector<CoordinateChange>& steps,
                                                std::vector<double> x) {
    for (auto& s : steps) {
        if (auto* r = std::get_if<Reflection>(&s)) {
            for (auto a : r->axes) x[a - 1] = -x[a - 1];
        } else if (auto* t = std::get_if<Translation>(&s)) {
            for (std::size_t i = 0; i < x.size(); ++i) x[i] -= to_double(t->w[i]);
        } else if (auto* q = std::get_if<QuasiTranslationStep>(&s)) {
            std::vector<double> other;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (i != q->axis - 1) other.push_back(x[i]);
            x[q->axis - 1] -= q->r.evaluate(other);
        } else {
            const auto& a = std::get<MonomialMapStep>(s).a;
            std::size_t n = x.size();
            for (double v : x)
                if (v <= 0) return std::nullopt;
            RMat am(n, RVec(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) am[i][j] = Rat(Int(a[i][j]));
            auto inv = inverse(am);
            if (!inv) return std::nullopt;
            std::vector<double> lx(n);
            for (std::size_t i = 0; i < n; ++i) lx[i] = std::log(x[i]);
            std::vector<double> z(n);
            for (std::size_t i = 0; i < n; ++i) {
                double s2 = 0;
                for (std::size_t j = 0; j < n; ++j) s2 += to_double((*inv)[i][j]) * lx[j];
                z[i] = std::exp(s2);
            }
            x = z;
        }
    }
    return x;
}

MonomializedForm monomialize(const Jet& f) {
    MonomializedForm out;
    out.exponents = f.content();
    out.unit = f.is_zero() ? f : f.divide_monomial(out.exponents);
    return out;
}

MonomializedForm jacobian_form(const std::vector<CoordinateChange>& steps, std::size_t n) {
    Jet total = Jet::constant(n, Rat(1));
    for (std::size_t j = 0; j < steps.size(); ++j) {
        Jet d = det_jet(steps[j], n);
        for (std::size_t k = j + 1; k < steps.size(); ++k) d = push_jet(d, steps[k]);
        total = total * d;
    }
    return monomialize(total);
}

std::vector<MonomializedForm> monomial_split(const Jet& product, const std::vector<Jet>& factors) {
    std::vector<MonomializedForm> out;
    MultiIndex sum(product.dim());
    for (auto& f : factors) {
        auto m = monomialize(f);
        sum = sum + m.exponents;
        out.push_back(std::move(m));
    }
    auto pm = monomialize(product);
    if (!(sum == pm.exponents))
        throw SplitFailure("factor exponents " + to_string(sum) +
                           " do not add up to the product exponents " + to_string(pm.exponents));
    return out;
}

RegionDescription pull_back_region(const RegionDescription& r, const IMatrix& a) {
    std::size_t n = a.size();
    RegionDescription out;
    out.dimension = r.dimension;
    out.eta = r.eta;
    out.orthant.assign(n, 1);
    for (auto& iq : r.inequalities) {
        MultiIndex p(n), q(n);
        for (std::size_t i = 0; i < n; ++i) {
            long long vp = 0, vq = 0;
            for (std::size_t m = 0; m < n; ++m) {
                vp += a[m][i] * iq.p.exponents[m];
                vq += a[m][i] * iq.q.exponents[m];
            }
            p[i] = static_cast<int>(vp);
            q[i] = static_cast<int>(vq);
        }
        for (std::size_t i = 0; i < n; ++i) {
            int g = std::min(p[i], q[i]);
            p[i] -= g;
            q[i] -= g;
        }
        RegionInequality ni;
        ni.p.coefficient = iq.p.coefficient;
        ni.q.coefficient = iq.q.coefficient;
        ni.p.exponents = p;
        ni.q.exponents = q;
        ni.bound = iq.bound;
        out.inequalities.push_back(ni);
    }
    return out;
}

std::vector<std::vector<double>> sample_region(const RegionDescription& r, std::size_t count,
                                               std::mt19937_64& rng) {
    std::size_t n = r.orthant.size();
    std::vector<double> lb(n, 0.0), ub(n, std::numeric_limits<double>::infinity());
    for (auto& iq : r.inequalities) {
        // pure-coordinate inequalities sharpen the sampling box
        int pi = -1, qi = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (iq.p.exponents[i] > 0) pi = (pi == -1) ? static_cast<int>(i) : -2;
            if (iq.q.exponents[i] > 0) qi = (qi == -1) ? static_cast<int>(i) : -2;
        }
        double b = to_double(iq.bound);
        double pc = std::abs(to_double(iq.p.coefficient));
        double qc = std::abs(to_double(iq.q.coefficient));
        if (pi >= 0 && qi == -1) {
            double v = std::pow(b * qc / pc, 1.0 / iq.p.exponents[pi]);
            ub[pi] = std::min(ub[pi], v);
        } else if (qi >= 0 && pi == -1) {
            double v = std::pow(pc / (b * qc), 1.0 / iq.q.exponents[qi]);
            lb[qi] = std::max(lb[qi], v);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(ub[i])) ub[i] = std::max(1.0, to_double(r.eta));
    std::vector<std::vector<double>> out;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t attempts = 0, limit = count * 2000 + 1000;
    while (out.size() < count && attempts++ < limit) {
        std::vector<double> x(n);
        bool ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (ub[i] <= lb[i]) { ok = false; break; }
            double lo = lb[i] + 1e-3 * (ub[i] - lb[i]);
            x[i] = lo + u(rng) * (ub[i] - lo);
        }
        if (!ok) break;
        for (auto& h : r.holes) {
            double dist = 0;
            for (std::size_t i = 0; i < n; ++i)
                dist = std::max(dist, std::abs(x[i] - to_double(h.center[i])));
            if (dist < to_double(h.radius)) { ok = false; break; }
        }
        if (!ok) continue;
        for (auto& iq : r.inequalities) {
            double pv = mono_eval(x, iq.p.exponents, std::abs(to_double(iq.p.coefficient)));
            double qv = mono_eval(x, iq.q.exponents, std::abs(to_double(iq.q.coefficient)));
            if (!(pv < qv * to_double(iq.bound))) { ok = false; break; }
        }
        if (ok) out.push_back(x);
    }
    return out;
}

std::pair<double, double> certify_unit_bounds(const Jet& u, const RegionDescription& r,
                                              std::size_t samples, std::mt19937_64& rng) {
    auto pts = sample_region(r, samples, rng);
    if (pts.empty()) throw std::runtime_error("chart region admits no sample points");
    double lo = 0, hi = 0;
    bool first = true;
    for (auto& x : pts) {
        double v = std::abs(u.evaluate(x));
        if (v < 1e-12) throw UnitVanishes("unit vanishes at a sampled region point");
        if (first) { lo = hi = v; first = false; }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo / 2, hi * 2};
}

}  // namespace monores
