#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "monores/parse.hpp"
#include "monores/polyhedron.hpp"

using namespace monores;

static Rat rpow(const std::vector<Rat>& x, const MultiIndex& m) {
    Rat v(1);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (int k = 0; k < m[i]; ++k) v *= x[i];
    return v;
}

TEST_CASE("cusp polyhedron") {
    Jet f = parse_polynomial("x^2 + y^3", {"x", "y"});
    auto p = build_polyhedron(f);
    REQUIRE(p.vertices.size() == 2);
    CHECK(p.vertices[0] == MultiIndex{0, 3});
    CHECK(p.vertices[1] == MultiIndex{2, 0});

    bool found = false;
    for (auto& fc : p.facets)
        if (fc.normal == std::vector<Int>{Int(3), Int(2)} && fc.offset == 6) found = true;
    CHECK(found);

    REQUIRE(p.compact_faces.size() == 3);
    CHECK(p.compact_faces[0].dim == 0);
    CHECK(p.compact_faces[1].dim == 0);
    CHECK(p.compact_faces[2].dim == 1);
    CHECK(p.compact_faces[2].vertex_indices == std::vector<std::size_t>{0, 1});
    REQUIRE(p.compact_faces[2].normals.size() == 1);
    CHECK(p.compact_faces[2].normals[0].first == std::vector<Int>{Int(3), Int(2)});
    CHECK(p.compact_faces[2].normals[0].second == 6);

    // vertex faces carry two independent normals, the first strictly positive
    for (int vi = 0; vi < 2; ++vi) {
        auto& fce = p.compact_faces[vi];
        REQUIRE(fce.normals.size() == 2);
        for (auto& x : fce.normals[0].first) CHECK(x > 0);
    }
}

TEST_CASE("vertex exclusion") {
    Jet f = parse_polynomial("x^2*y + x*y^3 + x^2*y^4", {"x", "y"});
    auto p = build_polyhedron(f);
    REQUIRE(p.vertices.size() == 2);
    CHECK(p.vertices[0] == MultiIndex{1, 3});
    CHECK(p.vertices[1] == MultiIndex{2, 1});
}

TEST_CASE("newton distance corpus") {
    auto nd = [](const std::string& s, const std::vector<std::string>& v) {
        return newton_distance(build_polyhedron(parse_polynomial(s, v)));
    };
    CHECK(nd("x^2 + y^3", {"x", "y"}) == Rat(6, 5));
    CHECK(nd("x^2 + y^2", {"x", "y"}) == Rat(1));
    CHECK(nd("x*y", {"x", "y"}) == Rat(1));
    CHECK(nd("x*y^2", {"x", "y"}) == Rat(2));
    CHECK(nd("x^2*y^3", {"x", "y"}) == Rat(3));
    CHECK(nd("x^2 + y^4", {"x", "y"}) == Rat(4, 3));
}

TEST_CASE("empty support") {
    CHECK_THROWS_AS(build_polyhedron(Jet(2)), EmptySupport);
}

TEST_CASE("vertex domination (Lemma 3.1), randomized") {
    std::mt19937 rng(101);
    for (int it = 0; it < 100; ++it) {
        std::size_t n = 1 + it % 3;
        std::uniform_int_distribution<int> ex(0, 6), nt(1, 5), px(1, 63);
        Jet f(n);
        int terms = nt(rng);
        for (int t = 0; t < terms; ++t) {
            MultiIndex m(n);
            for (std::size_t i = 0; i < n; ++i) m[i] = ex(rng);
            f.add_term(m, Rat(1));
        }
        auto p = build_polyhedron(f);
        REQUIRE(!p.vertices.empty());
        std::vector<Rat> x;
        for (std::size_t i = 0; i < n; ++i) x.push_back(Rat(px(rng), 64));
        for (auto& [w, c] : f.terms()) {
            std::size_t vi = dominating_vertex(p, x, w);
            Rat best(0);
            for (auto& v : p.vertices) best = std::max(best, rpow(x, v));
            CHECK(rpow(x, p.vertices[vi]) == best);
            CHECK(rpow(x, w) <= best);
        }
    }
}

TEST_CASE("facets support the whole support set") {
    std::mt19937 rng(202);
    for (int it = 0; it < 50; ++it) {
        std::size_t n = 1 + it % 3;
        std::uniform_int_distribution<int> ex(0, 5), nt(1, 4);
        Jet f(n);
        int terms = nt(rng);
        for (int t = 0; t < terms; ++t) {
            MultiIndex m(n);
            for (std::size_t i = 0; i < n; ++i) m[i] = ex(rng);
            f.add_term(m, Rat(1));
        }
        auto p = build_polyhedron(f);
        for (auto& fc : p.facets) {
            for (auto& [m, c] : f.terms()) {
                Rat s(0);
                for (std::size_t i = 0; i < n; ++i) s += Rat(fc.normal[i]) * Rat(m[i]);
                CHECK(s >= Rat(fc.offset));
            }
            for (auto& x : fc.normal) CHECK(x >= 0);
        }
        // every vertex lies in the support
        for (auto& v : p.vertices) CHECK(f.coefficient(v) != Rat(0));
    }
}
