#include "monores/resolver.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <future>
#include <set>

namespace monores {
namespace {

struct NeedSmallerEta : std::runtime_error {
    explicit NeedSmallerEta(const std::string& w = "chart needs a smaller box")
        : std::runtime_error(w) {}
};
struct NeedEscalation : std::runtime_error {
    explicit NeedEscalation(const std::string& w) : std::runtime_error(w) {}
};

unsigned long long mix_seed(unsigned long long s, unsigned long long k) {
    return s * 6364136223846793005ULL + 1442695040888963407ULL + k;
}

Jet embed_without_axis(const Jet& r, std::size_t n, std::size_t axis1) {
    Jet emb(n, r.truncation());
    for (auto& [m, c] : r.terms()) {
        MultiIndex t(n);
        for (std::size_t i = 0, j = 0; i < n; ++i)
            if (i != axis1 - 1) t[i] = m[j++];
        emb.add_term(t, c);
    }
    return emb;
}

Jet project_without_axis(const Jet& f, std::size_t axis1) {
    std::size_t n = f.dim();
    Jet out(n - 1, f.truncation());
    for (auto& [m, c] : f.terms()) {
        if (m[axis1 - 1] != 0) throw std::logic_error("projection drops a live variable");
        MultiIndex t(n - 1);
        for (std::size_t i = 0, j = 0; i < n; ++i)
            if (i != axis1 - 1) t[j++] = m[i];
        out.add_term(t, c);
    }
    return out;
}

// 1 / u as a truncated series; u(0) must be nonzero.
Jet series_inverse(const Jet& u, int degree) {
    std::size_t n = u.dim();
    Rat u0 = u.coefficient(MultiIndex(n));
    if (u0 == Rat(0)) throw PrecisionExhausted("series inverse of a vanishing unit");
    Jet v = Jet::constant(n, Rat(1)) - u * (Rat(1) / u0);
    v = v.truncated_to(degree);
    Jet acc = Jet::constant(n, Rat(1)).truncated_to(degree);
    Jet pw = Jet::constant(n, Rat(1)).truncated_to(degree);
    for (int j = 1; j <= degree; ++j) {
        pw = pw * v;
        if (pw.is_zero()) break;
        acc = acc + pw;
    }
    return acc * (Rat(1) / u0);
}

RegionDescription box_region(std::size_t n, const Rat& eta) {
    RegionDescription r;
    r.eta = eta;
    r.orthant.assign(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        RegionInequality iq;
        iq.p.exponents = MultiIndex(n);
        iq.p.exponents[i] = 1;
        iq.q.exponents = MultiIndex(n);
        iq.bound = eta;
        r.inequalities.push_back(iq);
    }
    return r;
}

// sigma_l as a ratio inequality x^p / x^q < 1 in the chart's parent
// coordinates: exponent vector w = sum_k q_{lk} b_k, cleared to integers.
CutoffFactor sigma_cutoff(const std::vector<Int>& q, const RMat& b, std::size_t n) {
    RVec w(n, Rat(0));
    for (std::size_t k = 0; k < q.size(); ++k)
        for (std::size_t m = 0; m < n; ++m) w[m] += Rat(q[k]) * b[k][m];
    Int lcm(1);
    for (auto& x : w) lcm = boost::integer::lcm(lcm, x.denominator());
    CutoffFactor f;
    f.kind = CutoffFactor::Ratio;
    f.ineq.p.exponents = MultiIndex(n);
    f.ineq.q.exponents = MultiIndex(n);
    for (std::size_t m = 0; m < n; ++m) {
        Rat v = w[m] * Rat(lcm);
        long long iv = v.numerator().convert_to<long long>();
        if (iv > 0) f.ineq.p.exponents[m] = static_cast<int>(iv);
        else f.ineq.q.exponents[m] = static_cast<int>(-iv);
    }
    f.ineq.bound = Rat(1);
    return f;
}

class Builder {
public:
    Builder(const ResolutionConfig& cfg, int depth_limit) : cfg_(cfg), limit_(depth_limit) {}

    ResolutionStats stats;

    std::pair<std::unique_ptr<ChartNode>, Rat> full_neighborhood(
        const Jet& f, const std::vector<Jet>& fs, int depth, Rat eta_req,
        unsigned long long seed, const std::vector<CoordinateChange>& prefix,
        bool positive_only) {
        std::size_t n = f.dim();
        auto node = alloc_node(depth);
        std::vector<std::vector<int>> patterns;
        if (positive_only) {
            patterns.push_back(std::vector<int>(n, 1));
        } else {
            for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
                std::vector<int> s(n, 1);
                for (std::size_t i = 0; i < n; ++i)
                    if (mask & (std::size_t(1) << i)) s[i] = -1;
                patterns.push_back(s);
            }
        }
        Rat eta = eta_req;
        ResolutionStats entry_stats = stats;
        for (int round = 0; round < 6; ++round) {
            node->children.clear();
            stats = entry_stats;  // drop tallies from discarded rebuild rounds
            Rat min_eta = eta;
            std::vector<std::vector<CutoffFactor>> history;
            for (std::size_t idx = 0; idx < patterns.size(); ++idx) {
                auto& signs = patterns[idx];
                Reflection refl;
                for (std::size_t i = 0; i < n; ++i)
                    if (signs[i] == -1) refl.axes.push_back(i + 1);
                Jet fo = push_jet(f, CoordinateChange{refl});
                std::vector<Jet> fso;
                for (auto& g : fs) fso.push_back(push_jet(g, CoordinateChange{refl}));
                auto prefix2 = prefix;
                prefix2.push_back(refl);
                auto [child, used] =
                    positive_germ(fo, fso, depth, eta, mix_seed(seed, idx + 1), prefix2);
                child->steps = {refl};
                CutoffFactor of;
                of.kind = CutoffFactor::Orthant;
                of.signs = signs;
                child->weight.smoothing_c = cfg_.smoothing_c;
                child->weight.own = {of};
                child->weight.complemented = history;
                history.push_back(child->weight.own);
                min_eta = std::min(min_eta, used);
                node->children.push_back(std::move(child));
            }
            if (min_eta == eta) break;
            eta = min_eta;
        }
        node->region = box_region(n, eta);
        return {std::move(node), eta};
    }

    std::pair<std::unique_ptr<ChartNode>, Rat> positive_germ(
        const Jet& f, const std::vector<Jet>& fs, int depth, Rat eta_req,
        unsigned long long seed, const std::vector<CoordinateChange>& prefix) {
        std::size_t n = f.dim();
        auto node = alloc_node(depth);
        node->region = box_region(n, eta_req);
        if (depth > limit_) {
            mark_unresolved(*node, "depth limit reached");
            return {std::move(node), eta_req};
        }
        Order ord = f.order_of_vanishing();
        if (ord.kind == Order::BeyondPrecision || ord.kind == Order::Infinite) {
            ++stats.precision_losses;
            mark_unresolved(*node, "vanishing order beyond working precision");
            return {std::move(node), eta_req};
        }
        int kappa = ord.value;
        if (kappa == 0) {
            try {
                assemble_terminal(*node, f, fs, prefix, box_region(n, eta_req), seed);
            } catch (const std::exception& e) {
                mark_unresolved(*node, e.what());
            }
            return {std::move(node), eta_req};
        }

        // Case 2: some pure x_j order equals kappa and the x_j^{kappa-1}
        // coefficient series is nonzero: flatten it with a quasi-translation.
        // The quasi-translation itself always acts on the last axis, so a
        // matching axis j < n is first swapped into place (a permutation is an
        // invertible monomial map).
        if (n >= 2) {
            std::size_t qt_axis = 0;
            for (std::size_t j = n; j >= 1; --j) {
                auto dj = f.directional_order(j);
                bool low_j = false;
                for (auto& [m, c] : f.terms())
                    if (m[j - 1] == kappa - 1) low_j = true;
                if (dj && *dj == kappa && low_j) {
                    qt_axis = j;
                    break;
                }
            }
            if (qt_axis != 0 && qt_axis != n) {
                IMatrix p(n, std::vector<long long>(n, 0));
                for (std::size_t m = 0; m < n; ++m) p[m][m] = 1;
                std::swap(p[qt_axis - 1], p[n - 1]);
                MonomialMapStep perm{p};
                Jet f2 = push_jet(f, CoordinateChange{perm});
                std::vector<Jet> fs2;
                for (auto& g : fs) fs2.push_back(push_jet(g, CoordinateChange{perm}));
                auto prefix2 = prefix;
                prefix2.push_back(perm);
                auto [child, used] =
                    positive_germ(f2, fs2, depth, eta_req, mix_seed(seed, 99), prefix2);
                child->steps = {CoordinateChange{perm}};
                child->weight.smoothing_c = cfg_.smoothing_c;
                node->children.push_back(std::move(child));
                node->region = box_region(n, used);
                node->status = ChartStatus::Internal;
                return {std::move(node), used};
            }
            if (qt_axis == n) {
                try {
                    Jet r = implicit_series_root(f, kappa - 1, cfg_.working_degree);
                    if (!r.is_zero()) {
                        ++stats.quasi_translations;
                        QuasiTranslationStep qt{n, r};
                        Jet f2 = push_jet(f, CoordinateChange{qt});
                        std::vector<Jet> fs2;
                        for (auto& g : fs) fs2.push_back(push_jet(g, CoordinateChange{qt}));
                        auto prefix2 = prefix;
                        prefix2.push_back(qt);
                        auto [child, used] =
                            positive_germ(f2, fs2, depth + 1, eta_req, mix_seed(seed, 77), prefix2);
                        child->steps = {qt};
                        child->weight.smoothing_c = cfg_.smoothing_c;
                        node->children.push_back(std::move(child));
                        Rat claimed = used / 2;  // margin for the curved box image
                        node->region = box_region(n, claimed);
                        return {std::move(node), claimed};
                    }
                } catch (const PrecisionExhausted&) {
                    ++stats.precision_losses;
                    mark_unresolved(*node, "quasi-translation series exhausted working degree");
                    return {std::move(node), eta_req};
                }
            }
        }

        NewtonPolyhedron poly = build_polyhedron(f);
        ConstantSchedule schedule = constant_schedule(poly);
        Rat eta = std::min(eta_req, schedule.eta);
        std::string last_error = "no face chart attempt";
        for (int esc = 0; esc <= cfg_.escalation_retries; ++esc) {
            for (int shrink = 0; shrink <= cfg_.eta_halvings; ++shrink) {
                schedule.eta = eta;
                try {
                    node->children.clear();
                    build_face_charts(*node, f, fs, poly, schedule, depth, seed, prefix);
                    node->region = box_region(n, eta);
                    return {std::move(node), eta};
                } catch (const NeedSmallerEta& e) {
                    eta /= 2;
                    ++stats.eta_shrinks;
                    last_error = e.what();
                    if (std::getenv("MONORES_DEBUG"))
                        std::fprintf(stderr, "shrink depth=%d eta=%s: %s\n", depth,
                                     to_string(eta).c_str(), e.what());
                } catch (const NeedEscalation& e) {
                    last_error = e.what();
                    break;
                } catch (const std::exception& e) {
                    last_error = e.what();
                    break;
                }
            }
            schedule = escalate(schedule, poly);
            eta = std::min(eta, schedule.eta);
        }
        node->children.clear();
        mark_unresolved(*node, "face charts failed after retries: " + last_error);
        return {std::move(node), eta};
    }

private:
    const ResolutionConfig& cfg_;
    int limit_;

    std::unique_ptr<ChartNode> alloc_node(int depth) {
        auto node = std::make_unique<ChartNode>();
        node->depth = depth;
        node->weight.smoothing_c = cfg_.smoothing_c;
        ++stats.chart_count;
        stats.max_depth = std::max(stats.max_depth, depth);
        return node;
    }

    void mark_unresolved(ChartNode& node, const std::string& why) {
        node.status = ChartStatus::Unresolved;
        node.diagnostic = why;
        node.children.clear();
        ++stats.unresolved;
    }

    void assemble_terminal(ChartNode& node, const Jet& f, const std::vector<Jet>& fs,
                           const std::vector<CoordinateChange>& full_steps,
                           const RegionDescription& region, unsigned long long seed) {
        std::size_t n = f.dim();
        node.status = ChartStatus::Terminal;
        node.region = region;
        std::mt19937_64 rng(seed);
        auto forms = monomial_split(f, fs);
        for (auto& fm : forms) {
            auto b = certify_unit_bounds(fm.unit, region, cfg_.unit_samples, rng);
            fm.lo = b.first;
            fm.hi = b.second;
        }
        node.f_forms = std::move(forms);
        node.jac_form = jacobian_form(full_steps, n);
        {
            auto b = certify_unit_bounds(node.jac_form.unit, region, cfg_.unit_samples, rng);
            node.jac_form.lo = b.first;
            node.jac_form.hi = b.second;
        }
        node.component_forms.clear();
        for (std::size_t m = 0; m < n; ++m) {
            Jet comp = push_jet(Jet::variable(n, m + 1), full_steps);
            auto cf = monomialize(comp);
            auto b = certify_unit_bounds(cf.unit, region, cfg_.unit_samples, rng);
            cf.lo = b.first;
            cf.hi = b.second;
            node.component_forms.push_back(std::move(cf));
        }
    }

    std::vector<std::vector<double>> locate_unit_zeros(const Jet& h, const RegionDescription& region,
                                                       std::mt19937_64& rng) {
        std::size_t n = h.dim();
        auto pts = sample_region(region, cfg_.zero_search_samples, rng);
        if (pts.empty()) return {};
        std::vector<Jet> grads;
        for (std::size_t m = 0; m < n; ++m) grads.push_back(h.partial_derivative(m + 1));
        double hmax = 0;
        for (auto& p : pts) hmax = std::max(hmax, std::abs(h.evaluate(p)));
        if (hmax == 0) hmax = 1;
        std::vector<std::vector<double>> hits;
        for (auto& p : pts) {
            if (std::abs(h.evaluate(p)) > 0.25 * hmax) continue;
            std::vector<double> x = p;
            for (int it = 0; it < 60; ++it) {
                double hv = h.evaluate(x);
                double g2 = 0;
                std::vector<double> g(n);
                for (std::size_t m = 0; m < n; ++m) {
                    g[m] = grads[m].evaluate(x);
                    g2 += g[m] * g[m];
                }
                if (g2 < 1e-18) break;
                for (std::size_t m = 0; m < n; ++m) x[m] -= hv * g[m] / g2;
            }
            if (std::abs(h.evaluate(x)) > 1e-9 * hmax) continue;
            bool inside = true;
            for (auto& iq : region.inequalities) {
                double pv = std::abs(to_double(iq.p.coefficient)),
                       qv = std::abs(to_double(iq.q.coefficient));
                for (std::size_t i = 0; i < n; ++i) {
                    for (int k = 0; k < iq.p.exponents[i]; ++k) pv *= std::abs(x[i]);
                    for (int k = 0; k < iq.q.exponents[i]; ++k) qv *= std::abs(x[i]);
                }
                if (!(pv < qv * to_double(iq.bound) * 2.0)) { inside = false; break; }
            }
            for (std::size_t i = 0; i < n; ++i)
                if (x[i] < -0.05) inside = false;
            if (inside) hits.push_back(x);
        }
        return hits;
    }

    // A face chart child per simplicial cone, then unit certification or
    // translation recursion at located unit zeros.
    void build_face_charts(ChartNode& parent, const Jet& f, const std::vector<Jet>& fs,
                           const NewtonPolyhedron& poly, const ConstantSchedule& schedule,
                           int depth, unsigned long long seed,
                           const std::vector<CoordinateChange>& prefix) {
        std::size_t n = f.dim();
        std::vector<std::unique_ptr<ChartNode>> children;
        std::vector<std::vector<CutoffFactor>> history;
        std::size_t chart_idx = 0;
        for (std::size_t fi = 0; fi < poly.compact_faces.size(); ++fi) {
            const Face& face = poly.compact_faces[fi];
            std::size_t i = static_cast<std::size_t>(face.dim);
            RegionDescription region_par = region_for_face(poly, fi, schedule);
            DualGenerators dual;
            try {
                dual = dual_generators(poly, face);
            } catch (const DegenerateFace& e) {
                throw NeedEscalation(e.what());
            }
            std::size_t d = n - i;
            RMat l1(dual.L.begin(), dual.L.begin() + d);

            // u vectors: L1 (v' - v0) over non-face vertices, plus the L1 columns
            std::set<std::vector<Int>> uset;
            std::set<std::size_t> in_face(face.vertex_indices.begin(), face.vertex_indices.end());
            auto add_u = [&](const RVec& v) {
                bool nz = false;
                for (auto& x : v)
                    if (x != Rat(0)) nz = true;
                if (nz) uset.insert(primitive_integer(v));
            };
            const MultiIndex& v0 = poly.vertices[face.vertex_indices.front()];
            for (std::size_t vi = 0; vi < poly.vertices.size(); ++vi) {
                if (in_face.count(vi)) continue;
                RVec u(d, Rat(0));
                for (std::size_t l = 0; l < d; ++l)
                    for (std::size_t m = 0; m < n; ++m)
                        u[l] += l1[l][m] * Rat(poly.vertices[vi][m] - v0[m]);
                add_u(u);
            }
            for (std::size_t m = 0; m < n; ++m) {
                RVec u(d, Rat(0));
                for (std::size_t l = 0; l < d; ++l) u[l] = l1[l][m];
                add_u(u);
            }
            std::vector<std::vector<Int>> us(uset.begin(), uset.end());
            auto cones = triangulate_cone(us, d);

            for (auto& cone : cones) {
                ++chart_idx;
                // exponent rows of (sigma, t) in each x_m
                RMat qmat(d, RVec(d));
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b2 = 0; b2 < d; ++b2) qmat[a][b2] = Rat(cone.normals[a][b2]);
                auto qinv = inverse(qmat);
                if (!qinv) throw NeedEscalation("cone normal matrix singular");
                RMat zrows(n, RVec(n, Rat(0)));
                for (std::size_t l = 0; l < d; ++l)
                    for (std::size_t m = 0; m < n; ++m)
                        for (std::size_t k = 0; k < d; ++k)
                            zrows[l][m] += (*qinv)[k][l] * l1[k][m];
                for (std::size_t l = d; l < n; ++l) zrows[l] = dual.L[l];
                std::vector<long long> nvec;
                IMatrix g;
                try {
                    g = integer_monomial_map(zrows, nvec,
                                             i > 0 ? std::optional<std::size_t>(n - 1) : std::nullopt);
                } catch (const std::logic_error& e) {
                    throw NeedEscalation(e.what());
                }
                cone.rescale = nvec;
                IMatrix a(n, std::vector<long long>(n, 0));
                for (std::size_t r2 = 0; r2 < n; ++r2)
                    for (std::size_t c2 = 0; c2 < n; ++c2) a[r2][c2] = g[c2][r2];
                if (imatrix_det(a) == 0) throw NeedEscalation("chart monomial map singular");
                MonomialMapStep step{a};

                auto child = alloc_node(depth + 1);
                child->steps = {CoordinateChange{step}};
                child->weight.smoothing_c = cfg_.smoothing_c;
                for (auto& iq : region_par.inequalities) {
                    CutoffFactor cf;
                    cf.kind = CutoffFactor::Ratio;
                    cf.ineq = iq;
                    child->weight.own.push_back(cf);
                }
                for (std::size_t l = 0; l < d; ++l)
                    child->weight.own.push_back(sigma_cutoff(cone.normals[l], dual.b, n));
                child->weight.complemented = history;

                RegionDescription leaf_region = pull_back_region(region_par, a);
                leaf_region.dimension = i;
                for (std::size_t l = 0; l < d; ++l) {
                    RegionInequality iq;
                    iq.p.exponents = MultiIndex(n);
                    iq.p.exponents[l] = 1;
                    iq.q.exponents = MultiIndex(n);
                    iq.bound = Rat(1);
                    leaf_region.inequalities.push_back(iq);
                }

                Jet fz = push_jet(f, CoordinateChange{step});
                std::vector<Jet> fsz;
                for (auto& gjet : fs) fsz.push_back(push_jet(gjet, CoordinateChange{step}));
                MultiIndex m0 = fz.content();
                Jet h = fz.divide_monomial(m0);
                auto prefix2 = prefix;
                prefix2.push_back(CoordinateChange{step});

                std::mt19937_64 rng(mix_seed(seed, 100 + chart_idx));
                auto zeros = locate_unit_zeros(h, leaf_region, rng);
                if (zeros.empty()) {
                    try {
                        assemble_terminal(*child, fz, fsz, prefix2, leaf_region,
                                          mix_seed(seed, 200 + chart_idx));
                    } catch (const UnitVanishes& e) {
                        if (i == 0) throw NeedEscalation(e.what());
                        throw NeedSmallerEta("edge chart unit vanishes (face " +
                                             std::to_string(fi) + ")");
                    } catch (const std::exception& e) {
                        std::string mat;
                        for (auto& row : a) {
                            mat += "[";
                            for (auto v : row) mat += std::to_string(v) + " ";
                            mat += "]";
                        }
                        throw std::runtime_error("face " + std::to_string(fi) + " dim " +
                                                 std::to_string(i) + " map " + mat + " eta " +
                                                 to_string(schedule.eta) + ": " + e.what());
                    }
                } else {
                    if (i == 0) throw NeedEscalation("vertex chart unit vanishes in its region");
                    // snap zeros to rational centers on the sigma = 0 face
                    std::set<std::vector<Rat>> centers;
                    for (auto& z : zeros) {
                        std::vector<Rat> w(n, Rat(0));
                        for (std::size_t m = d; m < n; ++m) w[m] = rat_approx(z[m], 64);
                        bool pos = true;
                        for (std::size_t m = d; m < n; ++m)
                            if (w[m] <= Rat(0)) pos = false;
                        if (pos) centers.insert(w);
                    }
                    if (centers.empty()) throw NeedSmallerEta("no positive translation centers (face " + std::to_string(fi) + ")");
                    child->status = ChartStatus::Internal;
                    std::vector<std::vector<CutoffFactor>> center_history;
                    std::size_t cidx = 0;
                    for (auto& w : centers) {
                        ++cidx;
                        ++stats.translations;
                        Translation tr{w};
                        Jet fw = push_jet(fz, CoordinateChange{tr});
                        std::vector<Jet> fsw;
                        for (auto& gjet : fsz) fsw.push_back(push_jet(gjet, CoordinateChange{tr}));
                        auto prefix3 = prefix2;
                        prefix3.push_back(CoordinateChange{tr});
                        auto [gchild, used] =
                            full_neighborhood(fw, fsw, depth + 2, Rat(1, 4),
                                              mix_seed(seed, 300 + chart_idx * 16 + cidx), prefix3,
                                              false);
                        gchild->steps = {CoordinateChange{tr}};
                        CutoffFactor box;
                        box.kind = CutoffFactor::Box;
                        box.center = w;
                        box.radius = used;
                        gchild->weight.smoothing_c = cfg_.smoothing_c;
                        gchild->weight.own = {box};
                        gchild->weight.complemented = center_history;
                        center_history.push_back(gchild->weight.own);
                        RegionHole hole;
                        hole.center = w;
                        hole.radius = used / (Rat(1) + cfg_.smoothing_c);
                        leaf_region.holes.push_back(hole);
                        child->children.push_back(std::move(gchild));
                    }
                    // The sigma range must fit inside every translation box;
                    // otherwise the holes do not separate the remainder from
                    // the unit zeros (they only block a box, not a slab).
                    Rat min_hole = leaf_region.holes.front().radius;
                    for (auto& hh : leaf_region.holes) min_hole = std::min(min_hole, hh.radius);
                    {
                        RegionDescription nohole = leaf_region;
                        nohole.holes.clear();
                        std::mt19937_64 rng2(mix_seed(seed, 450 + chart_idx));
                        auto pts = sample_region(nohole, 1000, rng2);
                        double smax = 0;
                        for (auto& p : pts)
                            for (std::size_t l = 0; l < d; ++l) smax = std::max(smax, p[l]);
                        if (!(smax < to_double(min_hole)))
                            throw NeedSmallerEta("sigma range exceeds the translation boxes (face " +
                                                 std::to_string(fi) + ")");
                    }
                    // remainder leaf away from all zero slabs; empty means the
                    // translation boxes already cover the whole chart region
                    std::mt19937_64 rng2(mix_seed(seed, 400 + chart_idx));
                    auto pts = sample_region(leaf_region, 2000, rng2);
                    if (!pts.empty()) {
                        double hmin = 1e300, hmax = 0;
                        for (auto& p : pts) {
                            double v = std::abs(h.evaluate(p));
                            hmin = std::min(hmin, v);
                            hmax = std::max(hmax, v);
                        }
                        // explicit gate: h must stay away from zero on the remainder
                        if (hmin < 1e-4 * std::max(1.0, hmax))
                            throw NeedSmallerEta("remainder unit too close to zero (face " +
                                                 std::to_string(fi) + ")");
                        auto rem = alloc_node(depth + 2);
                        rem->weight.smoothing_c = cfg_.smoothing_c;
                        rem->weight.complemented = center_history;
                        try {
                            assemble_terminal(*rem, fz, fsz, prefix2, leaf_region,
                                              mix_seed(seed, 500 + chart_idx));
                        } catch (const UnitVanishes&) {
                            throw NeedSmallerEta("remainder unit vanishes (face " +
                                                 std::to_string(fi) + ")");
                        } catch (const std::exception& e) {
                            throw std::runtime_error("remainder of face " + std::to_string(fi) +
                                                     " dim " + std::to_string(i) + ": " + e.what());
                        }
                        child->children.push_back(std::move(rem));
                    }
                }
                history.push_back(child->weight.own);
                children.push_back(std::move(child));
            }
        }
        if (children.empty()) throw NeedEscalation("no face charts constructed");
        parent.children = std::move(children);
        parent.status = ChartStatus::Internal;
    }
};

void collect_leaves(const ChartNode* node, std::vector<const ChartNode*>& out) {
    if (node->children.empty()) {
        out.push_back(node);
        return;
    }
    for (auto& c : node->children) collect_leaves(c.get(), out);
}

double node_coverage(const ChartNode& node, const std::vector<double>& x) {
    double beta = node.weight.own.empty() && node.weight.complemented.empty()
                      ? 1.0
                      : evaluate_weight(node.weight, x);
    if (beta <= 0) return 0;
    if (node.children.empty()) return beta;
    auto z = invert_steps(node.steps, x);
    if (!z) return 0;
    double sum = 0;
    for (auto& c : node.children) sum += node_coverage(*c, *z);
    return beta * sum;
}

}  // namespace

std::vector<const ChartNode*> ResolutionResult::leaves() const {
    std::vector<const ChartNode*> out;
    if (root) collect_leaves(root.get(), out);
    return out;
}

ResolutionResult resolve_germ(const std::vector<Jet>& fs, const ResolutionConfig& cfg) {
    if (fs.empty()) throw std::invalid_argument("no input functions");
    std::size_t n = fs.front().dim();
    Jet product = Jet::constant(n, Rat(1));
    for (auto& f : fs) {
        if (f.dim() != n) throw std::invalid_argument("mixed ambient dimensions");
        if (f.is_zero()) throw EmptySupport();
        product = product * f;
    }
    Order ord = product.order_of_vanishing();
    int limit = cfg.max_depth >= 0 ? cfg.max_depth
                                   : static_cast<int>(n) * std::max(1, ord.value) + 8;

    ResolutionResult res;
    res.fs = fs;
    res.product = product;
    res.config = cfg;

    if (cfg.jobs > 1 && !cfg.positive_orthant_only) {
        // one builder per orthant, per-orthant seeds, in-order merge: the result
        // is bit-identical to the serial run
        std::vector<std::vector<int>> patterns;
        for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
            std::vector<int> s(n, 1);
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::size_t(1) << i)) s[i] = -1;
            patterns.push_back(s);
        }
        struct Piece {
            std::unique_ptr<ChartNode> node;
            Rat used;
            ResolutionStats st;
            Reflection refl;
            std::vector<int> signs;
        };
        auto root = std::make_unique<ChartNode>();
        root->weight.smoothing_c = cfg.smoothing_c;
        Rat eta = cfg.eta;
        ResolutionStats total;
        for (int round = 0; round < 6; ++round) {
            root->children.clear();
            total = ResolutionStats{};
            total.chart_count = 1;
            std::vector<std::future<Piece>> futs;
            for (std::size_t idx = 0; idx < patterns.size(); ++idx) {
                futs.push_back(std::async(std::launch::async, [&, idx]() {
                    Piece p;
                    p.signs = patterns[idx];
                    for (std::size_t i = 0; i < n; ++i)
                        if (p.signs[i] == -1) p.refl.axes.push_back(i + 1);
                    Jet fo = push_jet(product, CoordinateChange{p.refl});
                    std::vector<Jet> fso;
                    for (auto& g : fs) fso.push_back(push_jet(g, CoordinateChange{p.refl}));
                    Builder b(cfg, limit);
                    auto [child, used] = b.positive_germ(fo, fso, 0, eta,
                                                         mix_seed(cfg.seed, idx + 1), {p.refl});
                    p.node = std::move(child);
                    p.used = used;
                    p.st = b.stats;
                    return p;
                }));
            }
            Rat min_eta = eta;
            std::vector<std::vector<CutoffFactor>> history;
            for (auto& fut : futs) {
                Piece p = fut.get();
                p.node->steps = {p.refl};
                CutoffFactor of;
                of.kind = CutoffFactor::Orthant;
                of.signs = p.signs;
                p.node->weight.smoothing_c = cfg.smoothing_c;
                p.node->weight.own = {of};
                p.node->weight.complemented = history;
                history.push_back(p.node->weight.own);
                min_eta = std::min(min_eta, p.used);
                total.chart_count += p.st.chart_count;
                total.max_depth = std::max(total.max_depth, p.st.max_depth);
                total.unresolved += p.st.unresolved;
                total.precision_losses += p.st.precision_losses;
                total.quasi_translations += p.st.quasi_translations;
                total.translations += p.st.translations;
                total.eta_shrinks += p.st.eta_shrinks;
                root->children.push_back(std::move(p.node));
            }
            if (min_eta == eta) break;
            eta = min_eta;
        }
        root->region = box_region(n, eta);
        res.root = std::move(root);
        res.eta_used = eta;
        res.stats = total;
        return res;
    }

    Builder builder(cfg, limit);
    auto [root, eta] = builder.full_neighborhood(product, fs, 0, cfg.eta, cfg.seed, {},
                                                 cfg.positive_orthant_only);
    res.root = std::move(root);
    res.eta_used = eta;
    res.stats = builder.stats;
    return res;
}

double coverage_value(const ResolutionResult& res, const std::vector<double>& x) {
    if (!res.root) return 0;
    return node_coverage(*res.root, x);
}

Jet implicit_series_root(const Jet& g, int derivative_order, int degree) {
    std::size_t n = g.dim();
    Jet phi = g;
    for (int j = 0; j < derivative_order; ++j) phi = phi.partial_derivative(n);
    Jet phit = phi.truncated_to(degree);
    Jet r = Jet(n - 1).truncated_to(degree);
    for (int it = 0; it < 64; ++it) {
        Jet emb = embed_without_axis(r, n, n);
        Jet num = phit.substitute_axis(n, emb);
        if (num.is_zero()) break;
        Jet den = phit.partial_derivative(n).substitute_axis(n, emb);
        Jet upd = num * series_inverse(den, degree);
        Jet rn = r - project_without_axis(upd, n);
        rn = rn.truncated_to(degree);
        if (rn == r) break;
        r = rn;
    }
    // exactness upgrade: if the polished series is genuinely polynomial, keep it exact
    Jet rex = r.as_exact();
    if (phi.substitute_axis(n, embed_without_axis(rex, n, n)).is_zero()) return rex;
    return r;
}

std::optional<std::vector<CoordinateChange>> to_theorem24_form(const Jet& g, int max_coeff) {
    std::size_t n = g.dim();
    Order ord = g.order_of_vanishing();
    if (!ord.is_finite()) return std::nullopt;
    int kappa = ord.value;
    auto dord = g.directional_order(n);
    if (dord && *dord == kappa) return std::vector<CoordinateChange>{};
    if (n < 2) return std::nullopt;

    Jet homog(n);
    for (auto& [m, c] : g.terms())
        if (m.degree() == kappa) homog.add_term(m, c);

    std::vector<Rat> candidates{Rat(0)};
    for (int k = 1; k <= max_coeff; ++k) {
        candidates.push_back(Rat(k));
        candidates.push_back(Rat(-k));
    }
    std::vector<std::size_t> pick(n - 1, 0);
    for (;;) {
        std::vector<Rat> c(n, Rat(0));
        c[n - 1] = Rat(1);
        bool all_zero = true;
        for (std::size_t m = 0; m + 1 < n; ++m) {
            c[m] = candidates[pick[m]];
            if (c[m] != Rat(0)) all_zero = false;
        }
        if (!all_zero && homog.evaluate_exact(c) != Rat(0)) {
            std::vector<CoordinateChange> steps;
            for (std::size_t m = 0; m + 1 < n; ++m) {
                if (c[m] == Rat(0)) continue;
                Jet r(n - 1);
                MultiIndex mi(n - 1);
                mi[n - 2] = 1;  // x_n sits last among the remaining variables
                r.add_term(mi, c[m]);
                steps.push_back(QuasiTranslationStep{m + 1, r});
            }
            Jet g2 = push_jet(g, steps);
            auto d2 = g2.directional_order(n);
            if (d2 && *d2 == kappa) return steps;
        }
        std::size_t pos = 0;
        while (pos + 1 < n) {
            if (++pick[pos] < candidates.size()) break;
            pick[pos] = 0;
            ++pos;
        }
        if (pos + 1 >= n) break;
    }
    return std::nullopt;
}

}  // namespace monores
