// Newton polyhedron N(g): vertices, facets, compact faces, and the
// Newton-distance oracle.
#pragma once

#include <stdexcept>
#include <vector>

#include "monores/jet.hpp"
#include "monores/linalg.hpp"

namespace monores {

struct EmptySupport : std::runtime_error {
    EmptySupport() : std::runtime_error("Newton polyhedron of the zero jet") {}
};

// Supporting halfspace a . x >= c with a componentwise nonnegative, coprime integer.
struct Facet {
    std::vector<Int> normal;
    Int offset;
};

struct Face {
    int dim = 0;
    std::vector<std::size_t> vertex_indices;
    // exactly n - dim independent supporting normals; the first is strictly positive
    std::vector<std::pair<std::vector<Int>, Int>> normals;
};

struct NewtonPolyhedron {
    std::size_t dimension = 0;
    std::vector<MultiIndex> vertices;       // lex-sorted
    std::vector<Face> compact_faces;        // sorted by dim, then lex on vertex sets
    std::vector<Facet> facets;              // all facets, including unbounded ones
    std::vector<std::size_t> recession;     // free coordinate recession directions (always 1..n)
};

NewtonPolyhedron build_polyhedron(const Jet& f);

// Lemma 3.1: a vertex v with x^w <= x^v, for x in (0,1)^n, w in N(g).
std::size_t dominating_vertex(const NewtonPolyhedron& p, const std::vector<Rat>& x,
                              const MultiIndex& w);

// The unique t with (t,...,t) on the boundary of N(g).
Rat newton_distance(const NewtonPolyhedron& p);

}  // namespace monores
