#include "monores/subdivision.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace monores {
namespace {

MultiIndex reduce_pair(MultiIndex& a, MultiIndex& b) {
    // strip the common monomial factor from a ratio a/b
    MultiIndex g(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        g[i] = std::min(a[i], b[i]);
        a[i] -= g[i];
        b[i] -= g[i];
    }
    return g;
}

RegionInequality ratio_ineq(MultiIndex p, MultiIndex q, const Rat& bound) {
    reduce_pair(p, q);
    RegionInequality r;
    r.p.exponents = p;
    r.q.exponents = q;
    r.bound = bound;
    return r;
}

long long to_ll(const Int& v) { return v.convert_to<long long>(); }

std::vector<Int> primitive_ll(const std::vector<Int>& v) {
    Int g(0);
    for (auto& x : v) g = boost::integer::gcd(g, x);
    std::vector<Int> w = v;
    if (g > 1)
        for (auto& x : w) x /= g;
    return w;
}

Rat dot_iv(const std::vector<Int>& a, const std::vector<Int>& b) {
    Rat s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i] * b[i]);
    return s;
}

}  // namespace

ConstantSchedule constant_schedule(const NewtonPolyhedron& p) {
    ConstantSchedule s;
    std::size_t n = p.dimension;
    std::size_t m = p.vertices.size();
    s.A1 = Rat(4);
    s.A2 = Rat(2 * (Int(n) + Int(m) + 1));
    s.C.assign(n + 1, Rat(0));
    s.C[0] = Rat(4);
    long long a2 = to_ll(s.A2.numerator());
    for (std::size_t i = 1; i <= n; ++i) {
        Rat c = Rat(1);
        for (long long k = 0; k < a2; ++k) c *= s.C[i - 1];
        s.C[i] = c;
    }
    s.eta = Rat(1, 4);
    return s;
}

ConstantSchedule escalate(const ConstantSchedule& s, const NewtonPolyhedron& p) {
    ConstantSchedule r = constant_schedule(p);
    r.escalations = s.escalations + 1;
    r.A1 = s.A1 * 2;
    r.A2 = s.A2 * 2;
    r.C.assign(p.dimension + 1, Rat(0));
    r.C[0] = s.C[0] * s.C[0];
    long long a2 = to_ll(r.A2.numerator() / r.A2.denominator());
    for (std::size_t i = 1; i <= p.dimension; ++i) {
        Rat c = Rat(1);
        for (long long k = 0; k < a2; ++k) c *= r.C[i - 1];
        r.C[i] = c;
    }
    r.eta = s.eta / 2;
    return r;
}

RegionDescription region_for_face(const NewtonPolyhedron& p, std::size_t face_index,
                                  const ConstantSchedule& constants) {
    const Face& f = p.compact_faces.at(face_index);
    std::size_t n = p.dimension;
    RegionDescription r;
    r.dimension = static_cast<std::size_t>(f.dim);
    r.eta = constants.eta;
    r.orthant.assign(n, 1);

    std::set<std::size_t> in_face(f.vertex_indices.begin(), f.vertex_indices.end());
    // balance among face vertices, both directions
    if (f.dim > 0) {
        const Rat& cb = constants.C.at(f.dim - 1);
        for (auto vi : f.vertex_indices)
            for (auto wi : f.vertex_indices) {
                if (vi == wi) continue;
                r.inequalities.push_back(ratio_ineq(p.vertices[vi], p.vertices[wi], cb));
            }
    }
    // domination of the remaining vertices
    const Rat& cd = constants.C.at(f.dim);
    std::size_t anchor = f.vertex_indices.front();
    for (std::size_t vi = 0; vi < p.vertices.size(); ++vi) {
        if (in_face.count(vi)) continue;
        r.inequalities.push_back(ratio_ineq(p.vertices[vi], p.vertices[anchor], Rat(1) / cd));
    }
    // the ambient box
    for (std::size_t i = 0; i < n; ++i) {
        MultiIndex xi(n);
        xi[i] = 1;
        r.inequalities.push_back(ratio_ineq(xi, MultiIndex(n), constants.eta));
    }
    return r;
}

DualGenerators dual_generators(const NewtonPolyhedron& p, const Face& f) {
    std::size_t n = p.dimension;
    int i = f.dim;
    DualGenerators g;
    for (auto& [nv, off] : f.normals) {
        RVec row;
        for (auto& x : nv) row.push_back(Rat(x));
        g.a.push_back(row);
    }
    if (static_cast<int>(g.a.size()) != static_cast<int>(n) - i)
        throw DegenerateFace("face does not carry n - dim independent normals");
    if (i > 0) {
        // extend with unit vectors, ending with e_n
        std::vector<RVec> extra;
        for (std::size_t m = 0; m + 1 < n; ++m) {
            RVec e(n, Rat(0));
            e[m] = Rat(1);
            extra.push_back(e);
        }
        RVec en(n, Rat(0));
        en[n - 1] = Rat(1);
        RMat base = g.a;
        base.push_back(en);
        if (rank(base) != g.a.size() + 1)
            throw DegenerateFace("e_n lies in the span of the face normals");
        // middle rows a^{n-i+1}..a^{n-1}
        RMat mid = g.a;
        std::vector<RVec> chosen;
        for (auto& e : extra) {
            if (chosen.size() + g.a.size() + 1 == n) break;
            RMat trial = mid;
            trial.push_back(e);
            RMat trial2 = trial;
            trial2.push_back(en);
            if (rank(trial2) == trial.size() + 1 && rank(trial) == mid.size() + 1) {
                mid = trial;
                chosen.push_back(e);
            }
        }
        if (chosen.size() + g.a.size() + 1 != n)
            throw DegenerateFace("cannot extend face normals to an independent set");
        for (auto& e : chosen) g.a.push_back(e);
        g.a.push_back(en);
    }
    if (g.a.size() != n || rank(g.a) != n)
        throw DegenerateFace("extended normal system is singular");

    // b_l spans the intersection of the other hyperplanes, oriented by a^l . b_l > 0
    for (std::size_t l = 0; l < n; ++l) {
        RMat others;
        for (std::size_t m = 0; m < n; ++m)
            if (m != l) others.push_back(g.a[m]);
        std::vector<RVec> ns = others.empty() ? std::vector<RVec>{{Rat(1)}} : nullspace(others);
        if (ns.size() != 1) throw DegenerateFace("dual direction is not one-dimensional");
        auto bi = primitive_integer(ns[0]);
        RVec b;
        for (auto& x : bi) b.push_back(Rat(x));
        Rat s = dot(g.a[l], b);
        if (s == Rat(0)) throw DegenerateFace("dual direction orthogonal to its own normal");
        if (s < Rat(0))
            for (auto& x : b) x = -x;
        if (i > 0 && l == n - 1) {
            if (b[n - 1] == Rat(0)) throw DegenerateFace("b_n has vanishing last coordinate");
            Rat inv = Rat(1) / b[n - 1];
            for (auto& x : b) x *= inv;
        }
        g.b.push_back(b);
    }
    // L = B^{-1} with the b_l as columns
    RMat bmat(n, RVec(n, Rat(0)));
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t r2 = 0; r2 < n; ++r2) bmat[r2][l] = g.b[l][r2];
    auto li = inverse(bmat);
    if (!li) throw DegenerateFace("dual basis is singular");
    g.L = *li;
    g.d = g.L;  // column m of L expands e_m in the b basis
    for (auto& row : g.d)
        for (auto& x : row)
            if (x < Rat(0)) throw DegenerateFace("negative coefficient in the dual expansion");
    return g;
}

std::vector<SimplicialCone> triangulate_cone(const std::vector<std::vector<Int>>& u, std::size_t d) {
    std::vector<SimplicialCone> out;
    if (d == 0) return out;

    std::vector<std::vector<int>> orthants;
    for (std::size_t mask = 0; mask < (std::size_t(1) << d); ++mask) {
        std::vector<int> s(d);
        for (std::size_t i = 0; i < d; ++i) s[i] = (mask & (std::size_t(1) << i)) ? -1 : 1;
        orthants.push_back(s);
    }

    for (auto& sign : orthants) {
        // closed constraints n . S <= 0: orthant walls plus the u vectors
        std::vector<std::vector<Int>> cons;
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<Int> n(d, Int(0));
            n[i] = Int(-sign[i]);
            cons.push_back(n);
        }
        for (auto& v : u) cons.push_back(v);

        if (d == 1) {
            std::vector<Int> ray{Int(sign[0])};
            bool ok = true;
            for (auto& c : cons)
                if (dot_iv(c, ray) > Rat(0)) ok = false;
            // interior requires strict inequality for the u constraints
            for (auto& v : u)
                if (dot_iv(v, ray) == Rat(0)) ok = false;
            if (!ok) continue;
            SimplicialCone sc;
            sc.rays.push_back(ray);
            sc.normals.push_back({Int(-sign[0])});
            out.push_back(sc);
            continue;
        }

        // candidate rays: directions lying on d-1 of the constraint hyperplanes
        std::set<std::vector<Int>> cand;
        std::vector<std::size_t> idx(cons.size());
        for (std::size_t i = 0; i < cons.size(); ++i) idx[i] = i;
        std::vector<std::size_t> pick;
        std::function<void(std::size_t)> rec = [&](std::size_t start) {
            if (pick.size() == d - 1) {
                RMat rows;
                for (auto j : pick) {
                    RVec row;
                    for (auto& x : cons[j]) row.push_back(Rat(x));
                    rows.push_back(row);
                }
                auto ns = nullspace(rows);
                if (ns.size() != 1) return;
                auto r0 = primitive_integer(ns[0]);
                for (int orient = 0; orient < 2; ++orient) {
                    std::vector<Int> r = r0;
                    if (orient) for (auto& x : r) x = -x;
                    bool ok = true;
                    for (auto& c : cons)
                        if (dot_iv(c, r) > Rat(0)) { ok = false; break; }
                    bool nz = false;
                    for (auto& x : r) if (x != 0) nz = true;
                    if (ok && nz) cand.insert(primitive_ll(r));
                }
                return;
            }
            for (std::size_t j = start; j < cons.size(); ++j) {
                pick.push_back(j);
                rec(j + 1);
                pick.pop_back();
            }
        };
        rec(0);

        std::vector<std::vector<Int>> rays(cand.begin(), cand.end());
        if (rays.size() < d) continue;

        // need a genuinely d-dimensional piece: some ray combination strict on every u
        {
            std::vector<Rat> mix(d, Rat(0));
            for (auto& r : rays)
                for (std::size_t i = 0; i < d; ++i) mix[i] += Rat(r[i]);
            bool full = true;
            for (auto& v : u) {
                Rat s(0);
                for (std::size_t i = 0; i < d; ++i) s += Rat(v[i]) * mix[i];
                if (s >= Rat(0)) full = false;
            }
            for (std::size_t i = 0; i < d; ++i)
                if (mix[i] * Rat(sign[i]) <= Rat(0)) full = false;
            if (!full) continue;
        }

        // order rays around their centroid and fan-triangulate
        std::vector<double> cen(d, 0.0);
        for (auto& r : rays)
            for (std::size_t i = 0; i < d; ++i) cen[i] += to_double(Rat(r[i]));
        std::vector<std::pair<double, std::size_t>> order;
        if (d == 2) {
            for (std::size_t k = 0; k < rays.size(); ++k)
                order.emplace_back(std::atan2(to_double(Rat(rays[k][1])), to_double(Rat(rays[k][0]))), k);
            // keep the angular interval contiguous: all rays lie in one closed quadrant
            std::sort(order.begin(), order.end());
            if (order.back().first - order.front().first > 3.2) {
                // wrapped around the branch cut; shift negatives
                order.clear();
                for (std::size_t k = 0; k < rays.size(); ++k) {
                    double a = std::atan2(to_double(Rat(rays[k][1])), to_double(Rat(rays[k][0])));
                    if (a < 0) a += 2 * 3.14159265358979323846;
                    order.emplace_back(a, k);
                }
                std::sort(order.begin(), order.end());
            }
        } else {
            // project onto the plane orthogonal to the centroid, sort by angle
            double cn = 0;
            for (auto& x : cen) cn += x * x;
            cn = std::sqrt(cn);
            std::vector<double> e1(d, 0.0), e2(d, 0.0);
            // any vector not parallel to cen
            e1[0] = 1.0;
            double p = 0;
            for (std::size_t i = 0; i < d; ++i) p += e1[i] * cen[i] / cn;
            for (std::size_t i = 0; i < d; ++i) e1[i] -= p * cen[i] / cn;
            double n1 = 0;
            for (auto& x : e1) n1 += x * x;
            if (n1 < 1e-12) { e1.assign(d, 0.0); e1[1] = 1.0; p = 0;
                for (std::size_t i = 0; i < d; ++i) p += e1[i] * cen[i] / cn;
                for (std::size_t i = 0; i < d; ++i) e1[i] -= p * cen[i] / cn;
                n1 = 0; for (auto& x : e1) n1 += x * x; }
            for (auto& x : e1) x /= std::sqrt(n1);
            // e2 = cen x e1 works only in 3d; restrict to d == 3
            if (d == 3) {
                e2[0] = cen[1] / cn * e1[2] - cen[2] / cn * e1[1];
                e2[1] = cen[2] / cn * e1[0] - cen[0] / cn * e1[2];
                e2[2] = cen[0] / cn * e1[1] - cen[1] / cn * e1[0];
            } else {
                throw std::runtime_error("cone triangulation supports dimension <= 3");
            }
            for (std::size_t k = 0; k < rays.size(); ++k) {
                double a1 = 0, a2 = 0;
                for (std::size_t i = 0; i < d; ++i) {
                    a1 += to_double(Rat(rays[k][i])) * e1[i];
                    a2 += to_double(Rat(rays[k][i])) * e2[i];
                }
                order.emplace_back(std::atan2(a2, a1), k);
            }
            std::sort(order.begin(), order.end());
        }

        auto emit = [&](const std::vector<std::size_t>& ridx) {
            RMat rmat(d, RVec(d));
            for (std::size_t c = 0; c < d; ++c)
                for (std::size_t r2 = 0; r2 < d; ++r2) rmat[r2][c] = Rat(rays[ridx[c]][r2]);
            auto ri = inverse(rmat);
            if (!ri) return;
            SimplicialCone sc;
            for (auto j : ridx) sc.rays.push_back(rays[j]);
            for (std::size_t l = 0; l < d; ++l) {
                RVec q(d);
                for (std::size_t m = 0; m < d; ++m) q[m] = -(*ri)[l][m];
                sc.normals.push_back(primitive_integer(q));
            }
            out.push_back(sc);
        };

        if (d == 2) {
            std::vector<std::size_t> ridx{order.front().second, order.back().second};
            if (ridx[0] != ridx[1]) emit(ridx);
        } else {
            for (std::size_t k = 1; k + 1 < order.size(); ++k)
                emit({order[0].second, order[k].second, order[k + 1].second});
        }
    }
    return out;
}

IMatrix integer_monomial_map(const RMat& zrows, std::vector<long long>& n_out,
                             std::optional<std::size_t> fixed_row) {
    std::size_t n = zrows.size();
    IMatrix g(n, std::vector<long long>(n, 0));
    n_out.assign(n, 1);
    for (std::size_t l = 0; l < n; ++l) {
        Int lcm(1);
        for (auto& x : zrows[l]) lcm = boost::integer::lcm(lcm, x.denominator());
        if (fixed_row && *fixed_row == l && lcm != 1)
            throw std::logic_error("fixed row of the monomial map is not integral");
        n_out[l] = to_ll(lcm);
        for (std::size_t m = 0; m < n; ++m) {
            Rat v = zrows[l][m] * Rat(lcm);
            if (v.denominator() != 1) throw std::logic_error("denominator clearing failed");
            if (v < Rat(0)) throw std::logic_error("negative exponent in integer monomial map");
            g[l][m] = to_ll(v.numerator());
        }
    }
    return g;
}

std::vector<PartitionWeight> build_partition(const std::vector<RegionDescription>& regions,
                                             const Rat& smoothing_c) {
    std::vector<PartitionWeight> out;
    std::vector<CutoffFactor> prev_group;
    std::vector<std::vector<CutoffFactor>> history;
    for (auto& r : regions) {
        PartitionWeight w;
        w.smoothing_c = smoothing_c;
        bool restrict_orthant = false;
        for (int s : r.orthant)
            if (s != 1) restrict_orthant = true;
        if (restrict_orthant && !r.orthant.empty()) {
            CutoffFactor f;
            f.kind = CutoffFactor::Orthant;
            f.signs = r.orthant;
            w.own.push_back(f);
        }
        for (auto& iq : r.inequalities) {
            CutoffFactor f;
            f.kind = CutoffFactor::Ratio;
            f.ineq = iq;
            w.own.push_back(f);
        }
        w.complemented = history;
        history.push_back(w.own);
        out.push_back(w);
    }
    return out;
}

double plateau(double t, double c) {
    if (t <= 1.0) return 1.0;
    if (t >= 1.0 + c) return 0.0;
    double s = (t - 1.0) / c;
    return 1.0 - s * s * (3.0 - 2.0 * s);
}

double evaluate_cutoff(const CutoffFactor& f, double c, const std::vector<double>& x) {
    switch (f.kind) {
        case CutoffFactor::Ratio: {
            double pv = std::abs(to_double(f.ineq.p.coefficient));
            for (std::size_t i = 0; i < x.size(); ++i)
                for (int k = 0; k < f.ineq.p.exponents[i]; ++k) pv *= std::abs(x[i]);
            double qv = std::abs(to_double(f.ineq.q.coefficient));
            for (std::size_t i = 0; i < x.size(); ++i)
                for (int k = 0; k < f.ineq.q.exponents[i]; ++k) qv *= std::abs(x[i]);
            double b = to_double(f.ineq.bound);
            if (qv == 0.0) return pv == 0.0 ? 1.0 : 0.0;
            return plateau(pv / (qv * b), c);
        }
        case CutoffFactor::Box: {
            double dist = 0;
            for (std::size_t i = 0; i < x.size(); ++i)
                dist = std::max(dist, std::abs(x[i] - to_double(f.center[i])));
            double r = to_double(f.radius);
            if (r <= 0) return 0.0;
            return plateau(dist * (1.0 + c) / r, c);
        }
        case CutoffFactor::Orthant: {
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] * f.signs[i] <= 0) return 0.0;
            return 1.0;
        }
    }
    return 0.0;
}

double evaluate_weight(const PartitionWeight& w, const std::vector<double>& x) {
    double c = to_double(w.smoothing_c);
    double v = 1.0;
    for (auto& f : w.own) {
        v *= evaluate_cutoff(f, c, x);
        if (v == 0.0) return 0.0;
    }
    for (auto& g : w.complemented) {
        double gv = 1.0;
        for (auto& f : g) {
            gv *= evaluate_cutoff(f, c, x);
            if (gv == 0.0) break;
        }
        v *= 1.0 - gv;
        if (v == 0.0) return 0.0;
    }
    return v;
}

}  // namespace monores
