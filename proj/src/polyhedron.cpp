#include "monores/polyhedron.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>

namespace monores {
namespace {

RVec to_rvec(const MultiIndex& m) {
    RVec v;
    for (std::size_t i = 0; i < m.dim(); ++i) v.push_back(Rat(m[i]));
    return v;
}

Rat dot_iv(const std::vector<Int>& a, const MultiIndex& m) {
    Rat s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * Rat(m[i]);
    return s;
}

// Enumerate supporting facets of conv(union of S_a) by picking n-1 spanning
// directions from point differences and coordinate rays.
std::vector<Facet> enumerate_facets(const std::vector<MultiIndex>& support, std::size_t n) {
    std::set<std::pair<std::vector<Int>, Int>> seen;
    std::vector<Facet> out;

    std::vector<std::vector<std::size_t>> point_subsets;
    std::vector<std::size_t> cur;
    // all nonempty subsets of support of size <= n
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (!cur.empty() && cur.size() <= n) point_subsets.push_back(cur);
        if (cur.size() == n) return;
        for (std::size_t i = start; i < support.size(); ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);

    for (auto& pts : point_subsets) {
        std::size_t k = pts.size();
        std::size_t need_rays = n - k;
        std::vector<std::vector<std::size_t>> ray_sets;
        {
            std::vector<bool> mask(n, false);
            std::fill(mask.end() - need_rays, mask.end(), true);
            do {
                std::vector<std::size_t> rs;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask[i]) rs.push_back(i);
                ray_sets.push_back(rs);
            } while (std::next_permutation(mask.begin(), mask.end()));
        }
        for (auto& rs : ray_sets) {
            RMat dirs;
            for (std::size_t i = 1; i < k; ++i) {
                RVec d(n);
                for (std::size_t j = 0; j < n; ++j)
                    d[j] = Rat(support[pts[i]][j] - support[pts[0]][j]);
                dirs.push_back(d);
            }
            for (auto r : rs) {
                RVec d(n, Rat(0));
                d[r] = Rat(1);
                dirs.push_back(d);
            }
            std::vector<RVec> ns;
            if (dirs.empty()) {
                for (std::size_t i = 0; i < n; ++i) {
                    RVec e(n, Rat(0));
                    e[i] = Rat(1);
                    ns.push_back(e);
                }
            } else {
                ns = nullspace(dirs);
            }
            if (ns.size() != 1) continue;
            auto a = primitive_integer(ns[0]);
            // orient so support lies on the >= side
            bool any_pos = false, any_neg = false;
            Rat c = dot_iv(a, support[pts[0]]);
            for (auto& s : support) {
                Rat v = dot_iv(a, s);
                if (v > c) any_pos = true;
                if (v < c) any_neg = true;
            }
            if (any_pos && any_neg) continue;
            if (any_neg)
                for (auto& x : a) x = -x;
            bool nonneg = true;
            for (auto& x : a)
                if (x < 0) nonneg = false;
            if (!nonneg) continue;
            Rat cr = dot_iv(a, support[pts[0]]);
            Int coff = cr.numerator();  // integer since a integer, support integer
            auto key = std::make_pair(a, coff);
            if (seen.insert(key).second) out.push_back(Facet{a, coff});
        }
    }
    std::sort(out.begin(), out.end(), [](const Facet& x, const Facet& y) {
        return std::tie(x.normal, x.offset) < std::tie(y.normal, y.offset);
    });
    return out;
}

}  // namespace

NewtonPolyhedron build_polyhedron(const Jet& f) {
    if (f.is_zero()) throw EmptySupport();
    std::size_t n = f.dim();
    std::vector<MultiIndex> support;
    for (auto& [m, c] : f.terms()) support.push_back(m);

    NewtonPolyhedron p;
    p.dimension = n;
    p.facets = enumerate_facets(support, n);
    for (std::size_t i = 1; i <= n; ++i) p.recession.push_back(i);

    // vertices: support points with n independent tight facets
    for (auto& s : support) {
        RMat tight;
        for (auto& fc : p.facets)
            if (dot_iv(fc.normal, s) == Rat(fc.offset)) {
                RVec row;
                for (auto& x : fc.normal) row.push_back(Rat(x));
                tight.push_back(row);
            }
        if (!tight.empty() && rank(tight) == n) p.vertices.push_back(s);
    }
    std::sort(p.vertices.begin(), p.vertices.end());

    // compact faces: equality sets of facet subsets
    std::size_t fcount = p.facets.size();
    std::set<std::vector<std::size_t>> seen_faces;
    std::vector<Face> faces;
    for (std::size_t mask = 1; mask < (std::size_t(1) << fcount); ++mask) {
        std::vector<std::size_t> vs;
        for (std::size_t vi = 0; vi < p.vertices.size(); ++vi) {
            bool on = true;
            for (std::size_t fi = 0; fi < fcount && on; ++fi)
                if (mask & (std::size_t(1) << fi))
                    if (dot_iv(p.facets[fi].normal, p.vertices[vi]) != Rat(p.facets[fi].offset))
                        on = false;
            if (on) vs.push_back(vi);
        }
        if (vs.empty()) continue;
        // canonical active set over the whole vertex list of the face
        std::vector<std::size_t> active;
        for (std::size_t fi = 0; fi < fcount; ++fi) {
            bool all_on = true;
            for (auto vi : vs)
                if (dot_iv(p.facets[fi].normal, p.vertices[vi]) != Rat(p.facets[fi].offset)) {
                    all_on = false;
                    break;
                }
            if (all_on) active.push_back(fi);
        }
        if (active.empty()) continue;
        if (!seen_faces.insert(vs).second) continue;
        // compact iff every coordinate direction is blocked by some active normal
        bool compact = true;
        for (std::size_t i = 0; i < n && compact; ++i) {
            bool blocked = false;
            for (auto fi : active)
                if (p.facets[fi].normal[i] > 0) blocked = true;
            if (!blocked) compact = false;
        }
        if (!compact) continue;

        Face face;
        face.vertex_indices = vs;
        // dim = affine rank of the vertex set
        RMat diffs;
        for (std::size_t i = 1; i < vs.size(); ++i) {
            RVec d(n);
            for (std::size_t j = 0; j < n; ++j)
                d[j] = Rat(p.vertices[vs[i]][j] - p.vertices[vs[0]][j]);
            diffs.push_back(d);
        }
        face.dim = diffs.empty() ? 0 : static_cast<int>(rank(diffs));

        // first stored normal: strictly positive combination of the active ones
        std::vector<Int> apos(n, Int(0));
        Int cpos(0);
        for (auto fi : active) {
            for (std::size_t j = 0; j < n; ++j) apos[j] += p.facets[fi].normal[j];
            cpos += p.facets[fi].offset;
        }
        {
            Int g(0);
            for (auto& x : apos) g = boost::integer::gcd(g, x);
            g = boost::integer::gcd(g, cpos);
            if (g > 1) {
                for (auto& x : apos) x /= g;
                cpos /= g;
            }
        }
        face.normals.emplace_back(apos, cpos);
        RMat nm;
        {
            RVec row;
            for (auto& x : apos) row.push_back(Rat(x));
            nm.push_back(row);
        }
        for (auto fi : active) {
            if (static_cast<int>(face.normals.size()) == static_cast<int>(n) - face.dim) break;
            RVec row;
            for (auto& x : p.facets[fi].normal) row.push_back(Rat(x));
            RMat trial = nm;
            trial.push_back(row);
            if (rank(trial) > rank(nm)) {
                nm = trial;
                face.normals.emplace_back(p.facets[fi].normal, p.facets[fi].offset);
            }
        }
        faces.push_back(face);
    }
    std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
        return std::tie(a.dim, a.vertex_indices) < std::tie(b.dim, b.vertex_indices);
    });
    p.compact_faces = faces;
    return p;
}

std::size_t dominating_vertex(const NewtonPolyhedron& p, const std::vector<Rat>& x,
                              const MultiIndex& w) {
    auto power = [&](const MultiIndex& m) {
        Rat v(1);
        for (std::size_t i = 0; i < p.dimension; ++i)
            for (int k = 0; k < m[i]; ++k) v *= x[i];
        return v;
    };
    std::size_t best = 0;
    Rat best_v = power(p.vertices[0]);
    for (std::size_t i = 1; i < p.vertices.size(); ++i) {
        Rat v = power(p.vertices[i]);
        if (v > best_v) { best = i; best_v = v; }
    }
    (void)w;
    return best;
}

Rat newton_distance(const NewtonPolyhedron& p) {
    Rat best(0);
    for (auto& f : p.facets) {
        Int s(0);
        for (auto& x : f.normal) s += x;
        if (s == 0) continue;
        Rat t = Rat(f.offset) / Rat(s);
        if (t > best) best = t;
    }
    return best;
}

}  // namespace monores
